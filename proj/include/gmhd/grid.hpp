#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace gmhd {

/// Thrown for any out-of-domain argument (negative exponents, grid mismatch, bad config values).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Complex = std::complex<double>;

/// Physical samples, indexed (i, j) at x = 2*pi*i/n, y = 2*pi*j/n.
using RealArray = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic>;

/// Half-spectrum coefficients, indexed (kx, ky_index) with kx in [0, n/2]
/// and ky_index in [0, n) wrapping to ky in [-n/2, n/2).
using ComplexArray = Eigen::Array<Complex, Eigen::Dynamic, Eigen::Dynamic>;

/// Square periodic grid on [0, 2*pi)^2.
class Grid {
 public:
  explicit Grid(int n) : n_(n) {
    if (n < 8 || n % 2 != 0) {
      throw ParameterError("grid size must be even and >= 8, got " + std::to_string(n));
    }
  }

  int n() const { return n_; }
  /// Number of stored kx rows in the half spectrum.
  int nkx() const { return n_ / 2 + 1; }
  double length() const { return 2.0 * std::numbers::pi; }
  double dx() const { return length() / n_; }
  /// Quadrature weight of one collocation point.
  double cell_area() const { return dx() * dx(); }

  /// Signed wavenumber of a column index.
  int ky(int index) const { return index < n_ / 2 ? index : index - n_; }
  int kx(int row) const { return row; }
  /// Column index holding wavenumber ky (ky in [-n/2, n/2)).
  int ky_index(int ky) const { return ky >= 0 ? ky : ky + n_; }

  /// Largest retained |k_i| under the two-thirds rule. Strictly below n/3
  /// so that no alias of a quadratic product lands inside the band.
  int dealias_cutoff() const { return (n_ - 1) / 3; }

  bool operator==(const Grid& other) const { return n_ == other.n_; }
  bool operator!=(const Grid& other) const { return n_ != other.n_; }

 private:
  int n_;
};

inline void require_same_grid(const Grid& a, const Grid& b) {
  if (a != b) {
    throw ParameterError("grid mismatch: " + std::to_string(a.n()) + " vs " + std::to_string(b.n()));
  }
}

/// Weight of a half-spectrum row when summing over the full spectrum.
inline double hermitian_weight(const Grid& grid, int kx) {
  return (kx == 0 || kx == grid.n() / 2) ? 1.0 : 2.0;
}

}  // namespace gmhd
