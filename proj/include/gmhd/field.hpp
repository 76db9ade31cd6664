#pragma once

#include "gmhd/grid.hpp"

namespace gmhd {

/// Fourier coefficients of a real field, normalised so that
/// f(x) = sum_k coeffs(k) exp(i k.x).
struct SpectralField {
  Grid grid;
  ComplexArray coeffs;

  explicit SpectralField(const Grid& g) : grid(g), coeffs(ComplexArray::Zero(g.nkx(), g.n())) {}
  SpectralField(const Grid& g, ComplexArray c) : grid(g), coeffs(std::move(c)) {
    if (coeffs.rows() != g.nkx() || coeffs.cols() != g.n()) {
      throw ParameterError("coefficient array shape does not match grid");
    }
  }

  static SpectralField zero(const Grid& g) { return SpectralField(g); }

  Complex& at(int kx, int ky) { return coeffs(kx, grid.ky_index(ky)); }
  const Complex& at(int kx, int ky) const { return coeffs(kx, grid.ky_index(ky)); }

  Complex mean() const { return coeffs(0, 0); }

  SpectralField& operator+=(const SpectralField& o) {
    require_same_grid(grid, o.grid);
    coeffs += o.coeffs;
    return *this;
  }
  SpectralField& operator-=(const SpectralField& o) {
    require_same_grid(grid, o.grid);
    coeffs -= o.coeffs;
    return *this;
  }
  SpectralField& operator*=(double s) {
    coeffs *= s;
    return *this;
  }
};

inline SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
inline SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
inline SpectralField operator*(double s, SpectralField a) { return a *= s; }
inline SpectralField operator-(SpectralField a) { return a *= -1.0; }

/// Real samples on the n x n collocation lattice.
struct PhysicalField {
  Grid grid;
  RealArray values;

  explicit PhysicalField(const Grid& g) : grid(g), values(RealArray::Zero(g.n(), g.n())) {}
  PhysicalField(const Grid& g, RealArray v) : grid(g), values(std::move(v)) {
    if (values.rows() != g.n() || values.cols() != g.n()) {
      throw ParameterError("sample array shape does not match grid");
    }
  }

  /// Samples fn(x, y) at every collocation point.
  template <typename Fn>
  static PhysicalField sample(const Grid& g, Fn&& fn) {
    PhysicalField f(g);
    const double h = g.dx();
    for (int j = 0; j < g.n(); ++j) {
      for (int i = 0; i < g.n(); ++i) {
        f.values(i, j) = fn(h * i, h * j);
      }
    }
    return f;
  }
};

/// Forward transform; the result is exactly Hermitian on the self-conjugate rows.
SpectralField to_spectral(const PhysicalField& f);
/// Inverse transform.
PhysicalField to_physical(const SpectralField& f);

/// Enforces coeffs(-k) = conj(coeffs(k)) on the kx = 0 and kx = n/2 rows.
void symmetrize(SpectralField& f);

/// Zeroes every mode with max(|kx|, |ky|) above the two-thirds cutoff.
void dealias(SpectralField& f);
SpectralField dealiased(SpectralField f);

bool all_finite(const SpectralField& f);

}  // namespace gmhd
