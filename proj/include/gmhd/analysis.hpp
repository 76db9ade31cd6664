#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gmhd/diagnostics.hpp"

namespace gmhd {

// --- regime classification ------------------------------------------------

enum class Verdict { ProvenRegular, ConditionallyRegular, Open };

enum class Witness { CaseI, CaseII, CaseIII, WuCondition, Thm2Conditional, RemarkCombined };

struct RegimeVerdict {
  double alpha = 0.0;
  double beta = 0.0;
  Verdict verdict = Verdict::Open;
  /// Every condition that holds, in enum order.
  std::vector<Witness> witnesses;

  bool has(Witness w) const;
};

/// Conditions, each tested independently:
///   CaseI           alpha >= 1/2 and beta >= 1
///   CaseII          alpha < 1/2 and 2 alpha + beta > 2
///   CaseIII         alpha >= 2 and beta = 0
///   WuCondition     alpha >= 1, beta > 0, alpha + beta >= 2
///   Thm2Conditional alpha = 0 and beta > 1 (regular under a direction-field hypothesis)
///   RemarkCombined  alpha + beta >= 2 except the point (0, 2)
/// ProvenRegular iff one of the first four holds; otherwise ConditionallyRegular
/// iff Thm2Conditional holds; otherwise Open.
RegimeVerdict classify_regime(double alpha, double beta);

std::string to_string(Verdict v);
std::string to_string(Witness w);

/// "ProvenRegular [CaseI; WuCondition]", "Open", or for the excluded point
/// "ConditionallyRegular [Thm2Conditional; excluded from combined regime alpha+beta>=2]".
/// RemarkCombined is left out of the bracket; the full list is in `witnesses`.
std::string format_verdict(const RegimeVerdict& v);

// --- exponent algebra for 0 < alpha < 1/2 -----------------------------------

struct Case2Exponents {
  double xi = 0.0;
  double eta = 0.0;
  double a = 0.0;
  double p = 0.0;
};

/// xi = alpha - 1/p1, eta = 1 - 1/(p1 alpha), a = alpha/(1+alpha) (1 - 1/(p1 alpha)),
/// p = (1 - 2a) / (1/p1 + a alpha). Requires 0 < alpha < 1/2 and p1 > 1/alpha.
Case2Exponents exponents_case2(double alpha, double p1);

/// alpha - 1/p - (1 - 3 alpha/(alpha+1)) / (1 - 2a) * (alpha - 1/p1); zero up to rounding.
double case2_identity_defect(double alpha, double p1, const Case2Exponents& e);

// --- field corpora ------------------------------------------------------------

/// `count` random band-limited fields from seeds first_seed, first_seed+1, ...,
/// each rescaled to unit L^2 norm.
std::vector<SpectralField> make_corpus(const Grid& grid, int count, double k_max, std::uint64_t first_seed = 1);

/// Default corpus: 200 fields, k_max = n/8, seeds 1..200.
std::vector<SpectralField> default_corpus(const Grid& grid);

/// (stream function, magnetic potential) pairs, rescaled so that ||u||_2 = ||b||_2 = 1.
struct PotentialPair {
  SpectralField psi;
  SpectralField a;
};
std::vector<PotentialPair> make_pair_corpus(const Grid& grid, int count, double k_max, std::uint64_t first_seed = 1);
std::vector<PotentialPair> default_pair_corpus(const Grid& grid);

// --- positivity -------------------------------------------------------------

struct PositivityReport {
  double alpha = 0.0;
  int p = 2;
  std::size_t corpus_size = 0;
  /// Smallest value of the integral over the corpus.
  double min_value = 0.0;
  /// Smallest value of integral / ||omega||_p^p.
  double min_scaled = 0.0;
  bool pass = true;
};

/// int (Lambda^alpha omega) |omega|^{p-2} omega by collocation quadrature.
double positivity_integral(const SpectralField& omega, double alpha, int p);

/// PASS iff every field gives integral >= -1e-10 ||omega||_p^p.
PositivityReport check_positivity(double alpha, int p, const std::vector<SpectralField>& corpus);

// --- interpolation inequalities ---------------------------------------------

/// Norm of a derivative of the base field f:
///   || |grad^grads Lambda^lambda_power Delta^laplacians f| ||_{L^lp},
/// where |grad^g h| is the pointwise Frobenius norm over all ordered
/// index tuples (the absolute value for g = 0).
struct NormTerm {
  int laplacians = 0;
  int grads = 0;
  double lambda_power = 0.0;
  double lp = 2.0;

  /// Order under f -> f(lambda x) in two dimensions: 2 laplacians + grads + lambda_power - 2/lp.
  double scaling_order() const;
  std::string describe() const;
};

struct WeightedTerm {
  NormTerm norm;
  double exponent = 1.0;
};

/// lhs <= C prod rhs_i^{e_i} with sum e_i = 1, all terms applied to one base field.
class InequalitySpec {
 public:
  /// Throws ParameterError if the exponents do not sum to 1 or the two sides
  /// scale differently.
  InequalitySpec(std::string name, NormTerm lhs, std::vector<WeightedTerm> rhs);

  const std::string& name() const { return name_; }
  const NormTerm& lhs() const { return lhs_; }
  const std::vector<WeightedTerm>& rhs() const { return rhs_; }
  std::string describe() const;

 private:
  std::string name_;
  NormTerm lhs_;
  std::vector<WeightedTerm> rhs_;
};

/// Evaluates a NormTerm on a spectral field.
double evaluate_norm(const SpectralField& f, const NormTerm& term);

/// lhs / prod rhs^e for one field; NaN when the right side vanishes.
double inequality_ratio(const InequalitySpec& spec, const SpectralField& f);

struct RatioStats {
  int n = 0;
  std::size_t count = 0;
  double min = 0.0;
  double q10 = 0.0;
  double median = 0.0;
  double q90 = 0.0;
  double max = 0.0;
};

/// Order statistics of a ratio sample (linear interpolation between order statistics).
RatioStats ratio_stats(int n, std::vector<double> ratios);

struct ConstantReport {
  std::string name;
  std::size_t corpus_size = 0;
  /// One entry per refinement level, in increasing n.
  std::vector<RatioStats> levels;
  /// max ratio at the finest level over the one before, minus 1.
  double growth = 0.0;
  /// Max ratio finite and positive at every level and growth < 5%.
  bool pass = false;

  double max_ratio() const;
};

/// Ratios over a corpus at one resolution.
RatioStats check_inequality(const InequalitySpec& spec, const std::vector<SpectralField>& corpus);

/// Refinement study over default corpora at each n in `levels` (default 64, 128, 256).
ConstantReport inequality_refinement(const InequalitySpec& spec, const std::vector<int>& levels = {64, 128, 256},
                                     int corpus_size = 200);

/// The interpolation inequalities of the energy and higher-norm estimates.
/// Case-2 exponents use alpha = 0.4, p1 = 5.
std::vector<InequalitySpec> default_inequalities();

// --- logarithmic inequality (proxy form) -------------------------------------

/// ||f||^2_{H^k} summed over the multi-indices of order exactly k (distinct
/// multi-indices, each counted once).
double homogeneous_hk_squared(const SpectralField& f, int k);

/// |grad u|_inf / (1 + ||u||_2 + 2 |omega|_inf (1 + log(1 + ||omega||^2_{H^2} + ||j||^2_{H^2}))).
/// The BMO norm of omega is replaced by its upper bound 2 |omega|_inf.
double log_inequality_ratio(const SpectralField& psi, const SpectralField& a);

RatioStats log_inequality_check(const std::vector<PotentialPair>& corpus);
ConstantReport log_inequality_refinement(const std::vector<int>& levels = {64, 128, 256}, int corpus_size = 200);

// --- Gronwall -------------------------------------------------------------

struct GronwallReport {
  /// Per interval: phi-integral of eta minus (eta jump + psi-integral); >= -tol when the hypothesis holds.
  std::vector<double> hypothesis_margin;
  /// Per sample: eta(0) exp(int phi) - eta(t) - int psi, relative to the right side.
  std::vector<double> conclusion_margin;
  /// Samples whose preceding intervals all satisfy the hypothesis.
  std::size_t checked_samples = 0;
  std::size_t hypothesis_violations = 0;
  std::size_t conclusion_violations = 0;
  bool pass = false;
};

/// Discrete check of eta' + psi <= phi eta  =>  eta(t) + int psi <= eta(0) exp(int phi).
/// The hypothesis is checked on each interval in integrated form with
/// trapezoidal integrals and relative tolerance 1e-8. The conclusion is checked
/// wherever all earlier intervals satisfy it, allowing 1e-8 plus the trapezoid
/// defect sum (dt max phi)^2.
GronwallReport gronwall_check(const std::vector<double>& t, const std::vector<double>& eta,
                              const std::vector<double>& psi, const std::vector<double>& phi);

/// Smallest C for which eta' + psi <= C g eta holds on every interval in
/// the same integrated form (0 when the growth never needs it).
double fit_gronwall_constant(const std::vector<double>& t, const std::vector<double>& eta,
                             const std::vector<double>& psi, const std::vector<double>& g);

// --- report output --------------------------------------------------------

void write_constant_reports_csv(std::ostream& out, const std::vector<ConstantReport>& reports);
void write_constant_reports_text(std::ostream& out, const std::vector<ConstantReport>& reports);
void write_positivity_csv(std::ostream& out, const std::vector<PositivityReport>& reports);

}  // namespace gmhd
