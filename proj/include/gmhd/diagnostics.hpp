#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "gmhd/dynamics.hpp"

namespace gmhd {

/// Collocation-quadrature L^p norm, (sum |f|^p (2 pi / n)^2)^{1/p}; p = inf gives the grid maximum.
double lp_norm(const PhysicalField& f, double p);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Norms of the regularised direction field bhat = b / (|b|^2 + eps^2)^{1/2}.
///
/// Derivatives of b are taken spectrally and combined with the chain rule
/// pointwise, so bhat itself is never transformed. w2inf is the maximum over
/// all second partials of both components; w1inf likewise over first partials.
/// a_inf and b_inf are the sup norms of
///   B = bhat.grad bhat - (div bhat) bhat   and   A = perp-div B.
struct DirectionFieldNorms {
  double w1inf = 0.0;
  double w2inf = 0.0;
  double a_inf = 0.0;
  double b_inf = 0.0;
  double min_abs_b = 0.0;
  /// min |b| <= eps: the regularisation, not b, sets the values.
  bool regularization_dominated = false;
};

/// Pointwise values behind DirectionFieldNorms.
/// d[c][k] = d_k bhat_c, dd[c][k][l] = d_k d_l bhat_c.
struct DirectionField {
  RealArray abs_b;
  RealArray bhat[2];
  RealArray d[2][2];
  RealArray dd[2][2][2];
  RealArray coef_b[2];
  RealArray coef_a;
};

DirectionField direction_field(const SpectralField& b1, const SpectralField& b2, double eps);

DirectionFieldNorms direction_field_norms(const PhysicalField& b1, const PhysicalField& b2, double eps);
DirectionFieldNorms direction_field_norms(const SpectralField& b1, const SpectralField& b2, double eps);

struct DiagnosticsConfig {
  std::vector<double> p_list{4.0, 6.0};
  /// eps for the direction field is eps_bhat_factor * |b|_inf.
  double eps_bhat_factor = 1e-6;
};

/// One time sample of every monitored quantity.
struct DiagnosticsRecord {
  double t = 0.0;
  double energy = 0.0;      ///< (1/2) int |u|^2 + |b|^2
  double diss_u = 0.0;      ///< int |Lambda^alpha u|^2
  double diss_b = 0.0;      ///< int |Lambda^beta b|^2
  double omega_l2 = 0.0;
  double j_l2 = 0.0;
  std::vector<double> omega_lp;  ///< one entry per configured p
  double omega_linf = 0.0;
  double j_linf = 0.0;
  double grad_u_linf = 0.0;      ///< max of the pointwise Frobenius norm
  std::vector<double> grad_j_lp;  ///< || |grad j| ||_p per configured p
  double h1 = 0.0;               ///< ||omega||^2 + ||j||^2
  double h2 = 0.0;               ///< ||grad omega||^2 + ||grad j||^2
  double bkm_accum = 0.0;        ///< int_0^t |omega|_inf + |j|_inf
  double bhat_w1inf = 0.0;
  double bhat_w2inf = 0.0;
  double energy_residual = 0.0;  ///< balance defect of the interval ending here, over E(0)

  // Not part of the CSV layout.
  double b_linf = 0.0;
  double diss_omega = 0.0;  ///< ||Lambda^alpha omega||^2
  double diss_j = 0.0;      ///< ||Lambda^beta j||^2
  double cross_helicity = 0.0;
  double a_l2sq = 0.0;
  double bhat_min_abs_b = 0.0;
  double bkm_h1_accum = 0.0;  ///< int_0^t ||omega||_{H^1} + ||j||_{H^1} (embedding proxy)
};

/// Evaluates every instantaneous quantity; accumulators are left at zero.
DiagnosticsRecord compute_record(const GmhdState& state, const Params& params, const DiagnosticsConfig& config);

/// Ordered records of one trajectory plus the constants needed to interpret them.
class DiagnosticsSeries {
 public:
  DiagnosticsSeries(const Params& params, DiagnosticsConfig config);

  /// Appends a record, filling bkm_accum, bkm_h1_accum and energy_residual
  /// by trapezoidal integration from the previous sample.
  void append(DiagnosticsRecord record);

  const std::vector<DiagnosticsRecord>& records() const { return records_; }
  const Params& params() const { return params_; }
  const DiagnosticsConfig& config() const { return config_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  /// Position of p in the configured list; throws ParameterError if absent.
  std::size_t p_index(double p) const;

 private:
  Params params_;
  DiagnosticsConfig config_;
  std::vector<DiagnosticsRecord> records_;
  double h1_integrand_prev_ = 0.0;
};

/// max over sample intervals of |E(t2) - E(t1) + int (nu diss_u + kappa diss_b)| / E(0).
/// Requires at least 3 samples on a uniform cadence.
double energy_balance_residual(const DiagnosticsSeries& series);

struct H1Ledger {
  /// ||omega||^2 + ||j||^2 + int_0^t 2 nu ||Lambda^alpha omega||^2 + 2 kappa ||Lambda^beta j||^2
  std::vector<double> values;
  double max = 0.0;
  /// beta >= 1, the range in which the bound is known to hold.
  bool hypothesis_holds = false;
};
H1Ledger h1_ledger(const DiagnosticsSeries& series);

struct LpBoundReport {
  double p = 0.0;
  /// Per interval: growth of ||omega||_p minus the integrated bound (<= tol when satisfied).
  std::vector<double> excess;
  std::size_t violations = 0;
  double max_excess = 0.0;
  bool pass = true;
};

/// Audits ||omega(t2)||_p - ||omega(t1)||_p <= int |b|_inf ||grad j||_p + 1e-6 (1 + ||omega||_p).
LpBoundReport lp_vorticity_bound_check(const DiagnosticsSeries& series, double p);

/// Trapezoidal integral of |omega|_inf + |j|_inf. This bounds the BMO integral
/// from above up to the factor 2 since ||f||_BMO <= 2 ||f||_inf.
double bkm_accumulator(const DiagnosticsSeries& series);

/// Header: t,energy,diss_u,diss_b,omega_l2,j_l2,omega_linf,j_linf,grad_u_linf,h1,h2,
/// bkm_accum,bhat_w1inf,bhat_w2inf,energy_residual,omega_lp_<p>...
std::string diagnostics_csv_header(const DiagnosticsConfig& config);
void write_diagnostics_csv(std::ostream& out, const DiagnosticsSeries& series);

/// Formats a p value for column names (4 -> "4", 2.5 -> "2.5", inf -> "inf").
std::string format_p(double p);
/// 17 significant digits.
std::string format_number(double v);

}  // namespace gmhd
