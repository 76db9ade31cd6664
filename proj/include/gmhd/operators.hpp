#pragma once

#include "gmhd/field.hpp"

namespace gmhd {

/// Applies the diagonal multiplier m(kx, ky) to every stored coefficient.
template <typename Multiplier>
SpectralField apply_multiplier(const SpectralField& f, Multiplier&& m) {
  SpectralField out(f.grid);
  const Grid& g = f.grid;
  for (int col = 0; col < g.n(); ++col) {
    const int ky = g.ky(col);
    for (int row = 0; row < g.nkx(); ++row) {
      out.coeffs(row, col) = m(row, ky) * f.coeffs(row, col);
    }
  }
  return out;
}

inline double wavenumber_squared(int kx, int ky) {
  return static_cast<double>(kx) * kx + static_cast<double>(ky) * ky;
}

/// Lambda^s = (-Delta)^{s/2}: multiplies by |k|^s. The mean mode is
/// annihilated for s > 0 and kept for s = 0.
SpectralField fractional_power(const SpectralField& f, double s);

/// Spectral partial derivative along axis 1 (x) or 2 (y). Nyquist modes map to zero.
SpectralField derivative(const SpectralField& f, int axis);

/// Mixed partial derivative: `order1` times along x, `order2` times along y.
SpectralField partial(const SpectralField& f, int order1, int order2);

SpectralField laplacian(const SpectralField& f);

/// (-Delta)^{-1} with the mean mode set to zero.
SpectralField inverse_laplacian(const SpectralField& f);

struct VectorField {
  SpectralField c1;
  SpectralField c2;
};

struct Velocity {
  SpectralField u1;
  SpectralField u2;
  /// True when the input vorticity had a nonzero mean that was projected out.
  bool mean_removed = false;
};

/// Velocity with curl omega and zero divergence: u = perp-grad psi, Delta psi = omega.
Velocity biot_savart(const SpectralField& omega);

struct MagneticField {
  SpectralField b1;
  SpectralField b2;
  SpectralField j;
};

/// b = perp-grad a = (-d2 a, d1 a) and current j = Delta a.
MagneticField field_from_potential(const SpectralField& a);

/// perp-grad . (v1, v2) = -d2 v1 + d1 v2.
SpectralField perp_divergence(const SpectralField& v1, const SpectralField& v2);
SpectralField divergence(const SpectralField& v1, const SpectralField& v2);

/// Product of two fields under the two-thirds rule: both factors truncated,
/// multiplied on the collocation grid, and the result truncated again.
SpectralField dealiased_product(const SpectralField& f, const SpectralField& g);
SpectralField dealiased_product(const PhysicalField& f, const PhysicalField& g);

/// Advection v . grad f with every product dealiased.
SpectralField advect(const SpectralField& v1, const SpectralField& v2, const SpectralField& f);

/// ||Lambda^s f||_2 computed from the coefficients:
/// (sum_k |k|^{2s} |f_k|^2 (2 pi)^2)^{1/2}. The mean mode contributes only for s = 0.
double homogeneous_sobolev_norm(const SpectralField& f, double s);

/// Largest coefficient magnitude.
double max_coefficient(const SpectralField& f);

}  // namespace gmhd
