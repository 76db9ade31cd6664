#include "gmhd/operators.hpp"

#include <cmath>
#include <string>

namespace gmhd {

SpectralField fractional_power(const SpectralField& f, double s) {
  if (!std::isfinite(s) || s < 0.0) {
    throw ParameterError("fractional power exponent must be finite and >= 0, got " + std::to_string(s));
  }
  if (s == 0.0) return f;
  const double half = 0.5 * s;
  return apply_multiplier(f, [half](int kx, int ky) {
    const double k2 = wavenumber_squared(kx, ky);
    return k2 == 0.0 ? 0.0 : std::pow(k2, half);
  });
}

SpectralField derivative(const SpectralField& f, int axis) {
  if (axis != 1 && axis != 2) {
    throw ParameterError("derivative axis must be 1 or 2, got " + std::to_string(axis));
  }
  const int nyquist = f.grid.n() / 2;
  return apply_multiplier(f, [axis, nyquist](int kx, int ky) {
    if (kx == nyquist || ky == -nyquist) return Complex(0.0, 0.0);
    return Complex(0.0, static_cast<double>(axis == 1 ? kx : ky));
  });
}

SpectralField partial(const SpectralField& f, int order1, int order2) {
  if (order1 < 0 || order2 < 0) throw ParameterError("derivative orders must be >= 0");
  SpectralField out = f;
  for (int i = 0; i < order1; ++i) out = derivative(out, 1);
  for (int i = 0; i < order2; ++i) out = derivative(out, 2);
  return out;
}

SpectralField laplacian(const SpectralField& f) {
  return apply_multiplier(f, [](int kx, int ky) { return -wavenumber_squared(kx, ky); });
}

SpectralField inverse_laplacian(const SpectralField& f) {
  return apply_multiplier(f, [](int kx, int ky) {
    const double k2 = wavenumber_squared(kx, ky);
    return k2 == 0.0 ? 0.0 : 1.0 / k2;
  });
}

Velocity biot_savart(const SpectralField& omega) {
  Velocity v{SpectralField(omega.grid), SpectralField(omega.grid), false};
  v.mean_removed = omega.mean() != Complex(0.0, 0.0);
  // psi = Delta^{-1} omega = -(-Delta)^{-1} omega
  const SpectralField psi = -inverse_laplacian(omega);
  v.u1 = -derivative(psi, 2);
  v.u2 = derivative(psi, 1);
  return v;
}

MagneticField field_from_potential(const SpectralField& a) {
  return MagneticField{-derivative(a, 2), derivative(a, 1), laplacian(a)};
}

SpectralField perp_divergence(const SpectralField& v1, const SpectralField& v2) {
  return derivative(v2, 1) - derivative(v1, 2);
}

SpectralField divergence(const SpectralField& v1, const SpectralField& v2) {
  return derivative(v1, 1) + derivative(v2, 2);
}

SpectralField dealiased_product(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f.grid, g.grid);
  const PhysicalField pf = to_physical(dealiased(f));
  const PhysicalField pg = to_physical(dealiased(g));
  SpectralField out = to_spectral(PhysicalField(f.grid, pf.values * pg.values));
  dealias(out);
  return out;
}

SpectralField dealiased_product(const PhysicalField& f, const PhysicalField& g) {
  require_same_grid(f.grid, g.grid);
  return dealiased_product(to_spectral(f), to_spectral(g));
}

SpectralField advect(const SpectralField& v1, const SpectralField& v2, const SpectralField& f) {
  require_same_grid(v1.grid, f.grid);
  require_same_grid(v2.grid, f.grid);
  const Grid& g = f.grid;
  const RealArray p1 = to_physical(dealiased(v1)).values;
  const RealArray p2 = to_physical(dealiased(v2)).values;
  const SpectralField ft = dealiased(f);
  const RealArray d1 = to_physical(derivative(ft, 1)).values;
  const RealArray d2 = to_physical(derivative(ft, 2)).values;
  SpectralField out = to_spectral(PhysicalField(g, p1 * d1 + p2 * d2));
  dealias(out);
  return out;
}


double homogeneous_sobolev_norm(const SpectralField& f, double s) {
  if (!std::isfinite(s)) throw ParameterError("Sobolev exponent must be finite");
  const Grid& g = f.grid;
  double sum = 0.0;
  for (int col = 0; col < g.n(); ++col) {
    const int ky = g.ky(col);
    for (int row = 0; row < g.nkx(); ++row) {
      const double k2 = wavenumber_squared(row, ky);
      double weight = hermitian_weight(g, row);
      if (k2 == 0.0) {
        if (s != 0.0) continue;
      } else if (s != 0.0) {
        weight *= std::pow(k2, s);
      }
      sum += weight * std::norm(f.coeffs(row, col));
    }
  }
  return g.length() * std::sqrt(sum);
}

double max_coefficient(const SpectralField& f) { return f.coeffs.abs().maxCoeff(); }

}  // namespace gmhd
