#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "gmhd/operators.hpp"

namespace gmhd {

/// Dissipation coefficients and exponents plus numerical controls.
///
/// The dissipation acts as -nu Lambda^{2 alpha} u and -kappa Lambda^{2 beta} b.
/// alpha = 0 is identified with nu = 0 and beta = 0 with kappa = 0; call
/// normalized() (or make_params) to apply that identification.
struct Params {
  double nu = 1.0;
  double kappa = 1.0;
  double alpha = 1.0;
  double beta = 1.0;
  double cfl = 0.4;
  double t_end = 1.0;
  double dt_max = 0.01;
  int n = 128;

  void validate() const;
  Params normalized() const;
};

/// Validates and normalizes in one go.
Params make_params(Params p);

/// Zero-mean, Hermitian, dealiased vorticity and magnetic potential.
struct GmhdState {
  SpectralField omega_hat;
  SpectralField a_hat;
  double t = 0.0;

  explicit GmhdState(const Grid& g) : omega_hat(g), a_hat(g) {}
  GmhdState(SpectralField omega, SpectralField a, double time)
      : omega_hat(std::move(omega)), a_hat(std::move(a)), t(time) {}

  const Grid& grid() const { return omega_hat.grid; }
};

/// Projects a state back onto the invariant set: Hermitian, zero mean, dealiased.
void enforce_invariants(GmhdState& s);

/// Nonlinear part of the tendency. The stiff linear part is diagonal and
/// is available through linear_rates().
struct Tendency {
  SpectralField d_omega;
  SpectralField d_a;
};

/// d_omega = -u.grad omega + b.grad j, d_a = -u.grad a (all products dealiased).
Tendency nonlinear_rhs(const GmhdState& state, const Params& params);

/// Diagonal decay rates nu |k|^{2 alpha} and kappa |k|^{2 beta}, stored per coefficient.
struct LinearRates {
  RealArray omega;
  RealArray a;
};
LinearRates linear_rates(const Grid& grid, const Params& params);

/// Bilinear lower-order term of the current equation,
/// T = 2 d1b1 (d1u2 + d2u1) + 2 d2u2 (d1b2 + d2b1), evaluated pointwise.
PhysicalField T_term(const SpectralField& u1, const SpectralField& u2, const SpectralField& b1,
                     const SpectralField& b2);

/// Dealiased (band-projected) version of T, used by the identity checks.
SpectralField T_term_spectral(const SpectralField& u1, const SpectralField& u2, const SpectralField& b1,
                              const SpectralField& b2);

struct IdentityResidual {
  double value = 0.0;
  /// Set when the spectral tail exceeds 1e-8 of the peak coefficient.
  bool under_resolved = false;
};

/// ||Delta(u.grad a) - [u.grad j - b.grad omega - T]||_2 / max(1, ||u.grad j||_2).
IdentityResidual current_identity_residual(const GmhdState& state);

/// ||perp-div(b.grad b) - b.grad j||_2 / max(1, ||b.grad j||_2).
IdentityResidual forcing_identity_residual(const GmhdState& state);

/// Quadrature values of the three integrals that vanish for divergence-free
/// u and b, each also divided by a product of the norms taking part.
struct CancellationIntegrals {
  double vorticity_advection = 0.0;  ///< int (u.grad omega) omega
  double current_advection = 0.0;    ///< int (u.grad j) j
  double cross_coupling = 0.0;       ///< int (b.grad j) omega + int (b.grad omega) j
  double vorticity_advection_rel = 0.0;  ///< over |u|_inf ||grad omega|| ||omega||
  double current_advection_rel = 0.0;    ///< over |u|_inf ||grad j|| ||j||
  double cross_coupling_rel = 0.0;       ///< over |b|_inf (||grad j|| ||omega|| + ||grad omega|| ||j||)
};
CancellationIntegrals cancellation_integrals(const GmhdState& state);

/// True when the largest coefficient beyond two thirds of the dealiasing
/// cutoff is below 1e-8 of the largest coefficient overall.
bool well_resolved(const SpectralField& f);

/// Raised by step() when a non-finite value appears. Carries the last valid state.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, GmhdState last_valid)
      : std::runtime_error(what), last_valid_(std::move(last_valid)) {}
  const GmhdState& last_valid() const { return last_valid_; }
  double time() const { return last_valid_.t; }

 private:
  GmhdState last_valid_;
};

/// One integrating-factor RK4 step (Lawson form): the diagonal dissipation is
/// propagated exactly, the nonlinearity by classical RK4.
GmhdState step(const GmhdState& state, const Params& params, double dt);

/// Same as step() but reuses precomputed decay rates.
GmhdState step(const GmhdState& state, const Params& params, const LinearRates& rates, double dt);

inline constexpr double kCflVelocityFloor = 1e-8;

/// cfl * dx / max(|u|_inf + |b|_inf, 1e-8), capped at params.dt_max.
double cfl_dt(const GmhdState& state, const Params& params);

// --- initial conditions ---------------------------------------------------

struct OrszagTang {};
struct Shear {};
struct SingleMode {
  int kx = 1;
  int ky = 0;
  double amplitude = 1.0;
};
struct RandomBandLimited {
  double k_max = 8.0;
  double amplitude = 1.0;
};
using InitialKind = std::variant<OrszagTang, Shear, SingleMode, RandomBandLimited>;

/// Builds an initial state.
///
/// - OrszagTang: psi = -(cos x + cos y), a = -cos y - cos(2x)/2, so
///   u = (-sin y, sin x) and b = (-sin y, sin 2x).
/// - Shear: u = (-sin y, 0), omega = cos y, a = 0.
/// - SingleMode: omega = amplitude * cos(kx x + ky y), a = 0.
/// - RandomBandLimited: omega and a drawn with random_band_limited_field()
///   from the seed (omega first, then a from the same stream).
GmhdState initial_condition(const InitialKind& kind, const Grid& grid, std::uint64_t seed);

/// Deterministic Gaussian band-limited field.
///
/// Generator: std::mt19937_64 seeded with `seed`. Each normal deviate is
/// produced by Box-Muller from two uniforms u = (x >> 11) * 2^-53, with
/// u1 mapped to (0, 1]. Modes are visited column by column (ky index 0..n-1),
/// row by row (kx 0..n/2) and a coefficient amplitude*(g1 + i g2)/sqrt(2) is
/// drawn for every mode with 0 < |k| <= k_max that is the canonical
/// representative of its conjugate pair. The conjugate partner is then set
/// by symmetry, the mean is zero, and the field is dealiased.
SpectralField random_band_limited_field(const Grid& grid, double k_max, double amplitude,
                                        std::uint64_t seed);

/// Snapshot file I/O (little-endian):
///   magic "GMHD2D\0\0", u32 version = 1, u32 n, f64 t, f64 nu, kappa, alpha, beta,
///   then n*n f64 physical omega followed by n*n f64 physical a, row-major [i][j]
///   with i the x index.
inline constexpr std::uint32_t kSnapshotVersion = 1;

struct Snapshot {
  GmhdState state;
  Params params;
};

void write_snapshot(const std::string& path, const GmhdState& state, const Params& params);
Snapshot read_snapshot(const std::string& path);

}  // namespace gmhd
