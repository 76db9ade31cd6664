#include "gmhd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace gmhd {

// --- regime classification ------------------------------------------------

bool RegimeVerdict::has(Witness w) const {
  return std::find(witnesses.begin(), witnesses.end(), w) != witnesses.end();
}

RegimeVerdict classify_regime(double alpha, double beta) {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || alpha < 0.0 || beta < 0.0) {
    throw ParameterError("alpha and beta must be finite and >= 0");
  }
  RegimeVerdict v;
  v.alpha = alpha;
  v.beta = beta;
  const double sum = alpha + beta;
  if (alpha >= 0.5 && beta >= 1.0) v.witnesses.push_back(Witness::CaseI);
  if (alpha < 0.5 && 2.0 * alpha + beta > 2.0) v.witnesses.push_back(Witness::CaseII);
  if (alpha >= 2.0 && beta == 0.0) v.witnesses.push_back(Witness::CaseIII);
  if (alpha >= 1.0 && beta > 0.0 && sum >= 2.0) v.witnesses.push_back(Witness::WuCondition);
  if (alpha == 0.0 && beta > 1.0) v.witnesses.push_back(Witness::Thm2Conditional);
  if (sum >= 2.0 && !(alpha == 0.0 && beta == 2.0)) v.witnesses.push_back(Witness::RemarkCombined);

  const bool proven = v.has(Witness::CaseI) || v.has(Witness::CaseII) || v.has(Witness::CaseIII) ||
                      v.has(Witness::WuCondition);
  if (proven) {
    v.verdict = Verdict::ProvenRegular;
  } else if (v.has(Witness::Thm2Conditional)) {
    v.verdict = Verdict::ConditionallyRegular;
  } else {
    v.verdict = Verdict::Open;
  }
  return v;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::ProvenRegular: return "ProvenRegular";
    case Verdict::ConditionallyRegular: return "ConditionallyRegular";
    case Verdict::Open: return "Open";
  }
  return "Open";
}

std::string to_string(Witness w) {
  switch (w) {
    case Witness::CaseI: return "CaseI";
    case Witness::CaseII: return "CaseII";
    case Witness::CaseIII: return "CaseIII";
    case Witness::WuCondition: return "WuCondition";
    case Witness::Thm2Conditional: return "Thm2Conditional";
    case Witness::RemarkCombined: return "RemarkCombined";
  }
  return "";
}

std::string format_verdict(const RegimeVerdict& v) {
  std::vector<std::string> parts;
  for (Witness w : v.witnesses) {
    if (w != Witness::RemarkCombined) parts.push_back(to_string(w));
  }
  if (v.alpha == 0.0 && v.beta == 2.0) parts.push_back("excluded from combined regime alpha+beta>=2");
  std::string out = to_string(v.verdict);
  if (!parts.empty()) {
    out += " [";
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "; " : "") + parts[i];
    out += "]";
  }
  return out;
}

// --- exponent algebra -------------------------------------------------------

Case2Exponents exponents_case2(double alpha, double p1) {
  if (!(alpha > 0.0 && alpha < 0.5)) throw ParameterError("exponents_case2 needs 0 < alpha < 1/2");
  if (!std::isfinite(p1) || !(p1 > 1.0 / alpha) || p1 * alpha <= 1.0) {
    throw ParameterError("exponents_case2 needs p1 > 1/alpha");
  }
  Case2Exponents e;
  e.xi = alpha - 1.0 / p1;
  e.eta = 1.0 - 1.0 / (p1 * alpha);
  e.a = alpha / (1.0 + alpha) * (1.0 - 1.0 / (p1 * alpha));
  e.p = (1.0 - 2.0 * e.a) / (1.0 / p1 + e.a * alpha);
  return e;
}

double case2_identity_defect(double alpha, double p1, const Case2Exponents& e) {
  const double factor = (1.0 - 3.0 * alpha / (alpha + 1.0)) / (1.0 - 2.0 * e.a);
  return (alpha - 1.0 / e.p) - factor * (alpha - 1.0 / p1);
}

// --- corpora ----------------------------------------------------------------

std::vector<SpectralField> make_corpus(const Grid& grid, int count, double k_max, std::uint64_t first_seed) {
  if (count < 0) throw ParameterError("corpus size must be >= 0");
  std::vector<SpectralField> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    SpectralField f = random_band_limited_field(grid, k_max, 1.0, first_seed + i);
    const double norm = homogeneous_sobolev_norm(f, 0.0);
    if (norm > 0.0) f *= 1.0 / norm;
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<SpectralField> default_corpus(const Grid& grid) { return make_corpus(grid, 200, grid.n() / 8.0, 1); }

std::vector<PotentialPair> make_pair_corpus(const Grid& grid, int count, double k_max, std::uint64_t first_seed) {
  if (count < 0) throw ParameterError("corpus size must be >= 0");
  std::vector<PotentialPair> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const GmhdState s = initial_condition(RandomBandLimited{k_max, 1.0}, grid, first_seed + i);
    SpectralField psi = -inverse_laplacian(s.omega_hat);
    SpectralField a = s.a_hat;
    const double u_norm = homogeneous_sobolev_norm(psi, 1.0);
    const double b_norm = homogeneous_sobolev_norm(a, 1.0);
    if (u_norm > 0.0) psi *= 1.0 / u_norm;
    if (b_norm > 0.0) a *= 1.0 / b_norm;
    out.push_back({std::move(psi), std::move(a)});
  }
  return out;
}

std::vector<PotentialPair> default_pair_corpus(const Grid& grid) {
  return make_pair_corpus(grid, 200, grid.n() / 8.0, 1);
}

// --- positivity -------------------------------------------------------------

double positivity_integral(const SpectralField& omega, double alpha, int p) {
  if (p < 2) throw ParameterError("positivity exponent p must be >= 2");
  const RealArray w = to_physical(omega).values;
  const RealArray lw = to_physical(fractional_power(omega, alpha)).values;
  const RealArray weight = p == 2 ? RealArray::Ones(w.rows(), w.cols()) : RealArray(w.abs().pow(p - 2));
  return (lw * weight * w).sum() * omega.grid.cell_area();
}

PositivityReport check_positivity(double alpha, int p, const std::vector<SpectralField>& corpus) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw ParameterError("positivity check needs 0 < alpha <= 2");
  if (p < 2 || p % 2 != 0) throw ParameterError("positivity check needs an even p >= 2");
  PositivityReport r;
  r.alpha = alpha;
  r.p = p;
  r.corpus_size = corpus.size();
  r.min_value = kInfinity;
  r.min_scaled = kInfinity;
  for (const SpectralField& f : corpus) {
    const double value = positivity_integral(f, alpha, p);
    const double scale = std::pow(lp_norm(to_physical(f), p), p);
    r.min_value = std::min(r.min_value, value);
    if (scale > 0.0) r.min_scaled = std::min(r.min_scaled, value / scale);
    if (value < -1e-10 * scale) r.pass = false;
  }
  if (corpus.empty()) r.min_value = r.min_scaled = 0.0;
  return r;
}

// --- interpolation inequalities ---------------------------------------------

double NormTerm::scaling_order() const {
  const double inv_p = std::isinf(lp) ? 0.0 : 1.0 / lp;
  return 2.0 * laplacians + grads + lambda_power - 2.0 * inv_p;
}

std::string NormTerm::describe() const {
  std::ostringstream s;
  s << "||";
  if (grads > 0) s << "grad^" << grads << " ";
  if (lambda_power != 0.0) s << "Lambda^" << lambda_power << " ";
  if (laplacians > 0) s << "Delta^" << laplacians << " ";
  s << "f||_" << format_p(lp);
  return s.str();
}

InequalitySpec::InequalitySpec(std::string name, NormTerm lhs, std::vector<WeightedTerm> rhs)
    : name_(std::move(name)), lhs_(lhs), rhs_(std::move(rhs)) {
  auto check_term = [&](const NormTerm& t) {
    if (t.laplacians < 0 || t.grads < 0 || t.lambda_power < 0.0 || !(t.lp >= 1.0)) {
      throw ParameterError(name_ + ": invalid norm term");
    }
  };
  check_term(lhs_);
  if (rhs_.empty()) throw ParameterError(name_ + ": right side is empty");
  double total = 0.0, order = 0.0;
  for (const WeightedTerm& w : rhs_) {
    check_term(w.norm);
    if (!(w.exponent > 0.0)) throw ParameterError(name_ + ": exponents must be positive");
    total += w.exponent;
    order += w.exponent * w.norm.scaling_order();
  }
  if (std::abs(total - 1.0) > 1e-12) throw ParameterError(name_ + ": exponents do not sum to 1");
  if (std::abs(order - lhs_.scaling_order()) > 1e-12) {
    throw ParameterError(name_ + ": the two sides scale differently");
  }
}

std::string InequalitySpec::describe() const {
  std::ostringstream s;
  s << lhs_.describe() << " <= C";
  for (const WeightedTerm& w : rhs_) s << " " << w.norm.describe() << "^" << w.exponent;
  return s.str();
}

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

double evaluate_norm(const SpectralField& f, const NormTerm& term) {
  const int lap = term.laplacians;
  const double s = term.lambda_power;
  SpectralField h = apply_multiplier(f, [lap, s](int kx, int ky) {
    const double k2 = wavenumber_squared(kx, ky);
    double m = std::pow(-k2, lap);
    if (s != 0.0) m *= k2 == 0.0 ? 0.0 : std::pow(k2, 0.5 * s);
    return m;
  });
  if (term.grads == 0) return lp_norm(to_physical(h), term.lp);
  RealArray sum = RealArray::Zero(f.grid.n(), f.grid.n());
  for (int o1 = 0; o1 <= term.grads; ++o1) {
    sum += binomial(term.grads, o1) * to_physical(partial(h, o1, term.grads - o1)).values.square();
  }
  return lp_norm(PhysicalField(f.grid, sum.sqrt()), term.lp);
}

double inequality_ratio(const InequalitySpec& spec, const SpectralField& f) {
  double right = 1.0;
  for (const WeightedTerm& w : spec.rhs()) right *= std::pow(evaluate_norm(f, w.norm), w.exponent);
  if (!(right > 0.0)) return std::nan("");
  return evaluate_norm(f, spec.lhs()) / right;
}

RatioStats ratio_stats(int n, std::vector<double> ratios) {
  RatioStats st;
  st.n = n;
  st.count = ratios.size();
  if (ratios.empty()) return st;
  std::sort(ratios.begin(), ratios.end());
  auto q = [&](double frac) {
    const double pos = frac * (ratios.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, ratios.size() - 1);
    return ratios[lo] + (pos - lo) * (ratios[hi] - ratios[lo]);
  };
  st.min = ratios.front();
  st.q10 = q(0.1);
  st.median = q(0.5);
  st.q90 = q(0.9);
  st.max = ratios.back();
  return st;
}

double ConstantReport::max_ratio() const {
  double m = 0.0;
  for (const RatioStats& l : levels) m = std::max(m, l.max);
  return m;
}

RatioStats check_inequality(const InequalitySpec& spec, const std::vector<SpectralField>& corpus) {
  if (corpus.empty()) throw ParameterError("inequality check needs a nonempty corpus");
  std::vector<double> ratios;
  ratios.reserve(corpus.size());
  for (const SpectralField& f : corpus) {
    const double r = inequality_ratio(spec, f);
    if (std::isnan(r)) throw ParameterError(spec.name() + ": corpus field with vanishing right side");
    ratios.push_back(r);
  }
  return ratio_stats(corpus.front().grid.n(), std::move(ratios));
}

namespace {

void finish_report(ConstantReport& r) {
  r.pass = !r.levels.empty();
  for (const RatioStats& l : r.levels) {
    if (!(std::isfinite(l.max) && l.max > 0.0)) r.pass = false;
  }
  if (r.levels.size() >= 2) {
    const double coarse = r.levels[r.levels.size() - 2].max;
    const double fine = r.levels.back().max;
    r.growth = fine / coarse - 1.0;
    if (!(r.growth < 0.05)) r.pass = false;
  }
}

}  // namespace

ConstantReport inequality_refinement(const InequalitySpec& spec, const std::vector<int>& levels, int corpus_size) {
  ConstantReport r;
  r.name = spec.name();
  r.corpus_size = static_cast<std::size_t>(corpus_size);
  for (int n : levels) {
    const Grid grid(n);
    r.levels.push_back(check_inequality(spec, make_corpus(grid, corpus_size, n / 8.0, 1)));
  }
  finish_report(r);
  return r;
}

std::vector<InequalitySpec> default_inequalities() {
  auto term = [](int lap, int grads, double lambda, double lp) { return NormTerm{lap, grads, lambda, lp}; };
  const double inf = kInfinity;
  const double alpha = 0.4, p1 = 5.0;
  const double two_q1 = 2.0 * p1 / (p1 - 1.0);
  const Case2Exponents e = exponents_case2(alpha, p1);
  const double beta = 1.5, a_beta = (beta - 1.0) / (beta + 1.0);

  std::vector<InequalitySpec> out;
  // Base field: vorticity.
  out.emplace_back("grad_vort_L3_half_lambda", term(0, 1, 0, 3),
                   std::vector<WeightedTerm>{{term(0, 0, 0.5, 2), 1.0 / 6}, {term(0, 1, 0.5, 2), 5.0 / 6}});
  out.emplace_back("grad_vort_L3_grad", term(0, 1, 0, 3),
                   std::vector<WeightedTerm>{{term(0, 1, 0, 2), 1.0 / 3}, {term(0, 1, 0.5, 2), 2.0 / 3}});
  out.emplace_back("vort_L3", term(0, 0, 0, 3),
                   std::vector<WeightedTerm>{{term(0, 0, 0, 2), 7.0 / 9}, {term(0, 1, 0.5, 2), 2.0 / 9}});
  out.emplace_back("grad_vort_L3_three_factor", term(0, 1, 0, 3),
                   std::vector<WeightedTerm>{{term(0, 0, 0.5, 2), 1.0 / 9},
                                             {term(0, 1, 0, 2), 1.0 / 9},
                                             {term(0, 1, 0.5, 2), 7.0 / 9}});
  out.emplace_back("grad_vort_L2q1_xi", term(0, 1, 0, two_q1),
                   std::vector<WeightedTerm>{{term(0, 0, alpha, 2), e.xi}, {term(0, 1, alpha, 2), 1.0 - e.xi}});
  out.emplace_back("grad_vort_L2q1_eta", term(0, 1, 0, two_q1),
                   std::vector<WeightedTerm>{{term(0, 1, 0, 2), e.eta}, {term(0, 1, alpha, 2), 1.0 - e.eta}});
  out.emplace_back("grad_vort_L2q1_combined", term(0, 1, 0, two_q1),
                   std::vector<WeightedTerm>{{term(0, 0, alpha, 2), e.a},
                                             {term(0, 1, 0, 2), e.a},
                                             {term(0, 1, alpha, 2), 1.0 - 2.0 * e.a}});
  out.emplace_back("vort_Lp1_by_Lp", term(0, 0, 0, p1),
                   std::vector<WeightedTerm>{{term(0, 0, 0, e.p), 1.0 - 2.0 * e.a}, {term(0, 1, alpha, 2), 2.0 * e.a}});
  // Base field: current.
  out.emplace_back("current_L4_lambda", term(0, 0, 0, 4),
                   std::vector<WeightedTerm>{{term(0, 0, 0, 2), 0.5}, {term(0, 0, 1, 2), 0.5}});
  out.emplace_back("current_L4_grad", term(0, 0, 0, 4),
                   std::vector<WeightedTerm>{{term(0, 0, 0, 2), 0.5}, {term(0, 1, 0, 2), 0.5}});
  out.emplace_back("grad_current_L4", term(0, 1, 0, 4),
                   std::vector<WeightedTerm>{{term(0, 1, 0, 2), 0.5}, {term(0, 1, 1, 2), 0.5}});
  // Base field: magnetic potential, so b = grad a up to rotation and j = Delta a.
  out.emplace_back("lambda_current_by_field", term(1, 0, 1, 2),
                   std::vector<WeightedTerm>{{term(0, 1, 0, 2), a_beta}, {term(1, 0, beta, 2), 1.0 - a_beta}});
  out.emplace_back("grad_field_L4_by_current", term(0, 2, 0, 4), std::vector<WeightedTerm>{{term(1, 0, 0, 4), 1.0}});
  out.emplace_back("grad_field_Linf", term(0, 2, 0, inf),
                   std::vector<WeightedTerm>{{term(0, 1, 0, 2), 1.0 / 3}, {term(1, 2, 0, 2), 2.0 / 3}});
  out.emplace_back("grad_current_L4_by_field", term(1, 1, 0, 4),
                   std::vector<WeightedTerm>{{term(0, 1, 0, 2), 1.0 / 6}, {term(1, 2, 0, 2), 5.0 / 6}});
  // Base field: stream function, so u = grad psi up to rotation and omega = Delta psi.
  out.emplace_back("grad_vort_L4_by_velocity", term(1, 1, 0, 4),
                   std::vector<WeightedTerm>{{term(0, 1, 0, 2), 0.5}, {term(1, 4, 0, 2), 0.5}});
  out.emplace_back("hess_velocity_L4", term(0, 3, 0, 4),
                   std::vector<WeightedTerm>{{term(0, 1, 0, 2), 1.0 / 6}, {term(1, 2, 0, 2), 5.0 / 6}});
  out.emplace_back("grad_velocity_L2", term(0, 2, 0, 2), std::vector<WeightedTerm>{{term(1, 0, 0, 2), 1.0}});
  return out;
}

// --- logarithmic inequality -------------------------------------------------

double homogeneous_hk_squared(const SpectralField& f, int k) {
  if (k < 0) throw ParameterError("Sobolev order must be >= 0");
  double total = 0.0;
  for (int o1 = 0; o1 <= k; ++o1) {
    const double v = homogeneous_sobolev_norm(partial(f, o1, k - o1), 0.0);
    total += v * v;
  }
  return total;
}

double log_inequality_ratio(const SpectralField& psi, const SpectralField& a) {
  require_same_grid(psi.grid, a.grid);
  RealArray grad_u = RealArray::Zero(psi.grid.n(), psi.grid.n());
  // |grad u| = |grad^2 psi| pointwise for u = perp-grad psi.
  grad_u += to_physical(partial(psi, 2, 0)).values.square();
  grad_u += 2.0 * to_physical(partial(psi, 1, 1)).values.square();
  grad_u += to_physical(partial(psi, 0, 2)).values.square();
  const double left = grad_u.sqrt().maxCoeff();
  const SpectralField omega = laplacian(psi);
  const SpectralField j = laplacian(a);
  const double u_l2 = homogeneous_sobolev_norm(psi, 1.0);
  const double omega_inf = to_physical(omega).values.abs().maxCoeff();
  const double h2 = homogeneous_hk_squared(omega, 2) + homogeneous_hk_squared(j, 2);
  const double right = 1.0 + u_l2 + 2.0 * omega_inf * (1.0 + std::log(1.0 + h2));
  return left / right;
}

RatioStats log_inequality_check(const std::vector<PotentialPair>& corpus) {
  if (corpus.empty()) throw ParameterError("log inequality check needs a nonempty corpus");
  std::vector<double> ratios;
  ratios.reserve(corpus.size());
  for (const PotentialPair& pair : corpus) ratios.push_back(log_inequality_ratio(pair.psi, pair.a));
  return ratio_stats(corpus.front().psi.grid.n(), std::move(ratios));
}

ConstantReport log_inequality_refinement(const std::vector<int>& levels, int corpus_size) {
  ConstantReport r;
  r.name = "log_grad_velocity_proxy";
  r.corpus_size = static_cast<std::size_t>(corpus_size);
  for (int n : levels) {
    const Grid grid(n);
    r.levels.push_back(log_inequality_check(make_pair_corpus(grid, corpus_size, n / 8.0, 1)));
  }
  finish_report(r);
  return r;
}

// --- Gronwall -------------------------------------------------------------

namespace {

void check_series(const std::vector<double>& t, std::initializer_list<const std::vector<double>*> series) {
  if (t.size() < 2) throw ParameterError("Gronwall check needs at least two samples");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) throw ParameterError("Gronwall check needs strictly increasing times");
  }
  for (const auto* s : series) {
    if (s->size() != t.size()) throw ParameterError("Gronwall series lengths differ");
    for (double v : *s) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw ParameterError("Gronwall series must be finite and nonnegative");
    }
  }
}

}  // namespace

GronwallReport gronwall_check(const std::vector<double>& t, const std::vector<double>& eta,
                              const std::vector<double>& psi, const std::vector<double>& phi) {
  check_series(t, {&eta, &psi, &phi});
  constexpr double tol = 1e-8;
  GronwallReport r;
  double psi_int = 0.0, phi_int = 0.0, defect = 0.0;
  bool hypothesis_so_far = true;
  r.conclusion_margin.push_back(0.0);
  r.checked_samples = 1;
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double dt = t[i] - t[i - 1];
    const double psi_step = 0.5 * dt * (psi[i - 1] + psi[i]);
    const double growth = 0.5 * dt * (phi[i - 1] * eta[i - 1] + phi[i] * eta[i]);
    const double need = eta[i] - eta[i - 1] + psi_step;
    const double margin = growth - need;
    r.hypothesis_margin.push_back(margin);
    const double scale = std::max({std::abs(eta[i - 1]), std::abs(eta[i]), psi_step, growth});
    if (margin < -tol * scale) {
      ++r.hypothesis_violations;
      hypothesis_so_far = false;
    }

    psi_int += psi_step;
    phi_int += 0.5 * dt * (phi[i - 1] + phi[i]);
    const double step_phi = dt * std::max(phi[i - 1], phi[i]);
    defect += step_phi * step_phi;
    const double right = eta[0] * std::exp(phi_int);
    const double left = eta[i] + psi_int;
    const double rel = right > 0.0 ? (right - left) / right : -left;
    r.conclusion_margin.push_back(rel);
    if (hypothesis_so_far) {
      ++r.checked_samples;
      if (left > right * (1.0 + tol + defect) + tol * std::abs(left)) ++r.conclusion_violations;
    }
  }
  r.pass = r.conclusion_violations == 0;
  return r;
}

double fit_gronwall_constant(const std::vector<double>& t, const std::vector<double>& eta,
                             const std::vector<double>& psi, const std::vector<double>& g) {
  check_series(t, {&eta, &psi, &g});
  double c = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double dt = t[i] - t[i - 1];
    const double need = eta[i] - eta[i - 1] + 0.5 * dt * (psi[i - 1] + psi[i]);
    const double per_unit = 0.5 * dt * (g[i - 1] * eta[i - 1] + g[i] * eta[i]);
    if (need <= 0.0) continue;
    if (!(per_unit > 0.0)) return kInfinity;
    c = std::max(c, need / per_unit);
  }
  return c;
}

// --- report output --------------------------------------------------------

void write_constant_reports_csv(std::ostream& out, const std::vector<ConstantReport>& reports) {
  out << "name,corpus_size,n,min,q10,median,q90,max,growth,pass\n";
  for (const ConstantReport& r : reports) {
    for (const RatioStats& l : r.levels) {
      out << r.name << ',' << r.corpus_size << ',' << l.n << ',' << format_number(l.min) << ','
          << format_number(l.q10) << ',' << format_number(l.median) << ',' << format_number(l.q90) << ','
          << format_number(l.max) << ',' << format_number(r.growth) << ',' << (r.pass ? "PASS" : "FAIL") << '\n';
    }
  }
}

void write_constant_reports_text(std::ostream& out, const std::vector<ConstantReport>& reports) {
  for (const ConstantReport& r : reports) {
    char line[256];
    std::snprintf(line, sizeof line, "%-28s %s  growth %+.3e  max ratios:", r.name.c_str(),
                  r.pass ? "PASS" : "FAIL", r.growth);
    out << line;
    for (const RatioStats& l : r.levels) {
      std::snprintf(line, sizeof line, "  n=%d %.6g", l.n, l.max);
      out << line;
    }
    out << '\n';
  }
}

void write_positivity_csv(std::ostream& out, const std::vector<PositivityReport>& reports) {
  out << "alpha,p,corpus_size,min_value,min_scaled,pass\n";
  for (const PositivityReport& r : reports) {
    out << format_number(r.alpha) << ',' << r.p << ',' << r.corpus_size << ',' << format_number(r.min_value) << ','
        << format_number(r.min_scaled) << ',' << (r.pass ? "PASS" : "FAIL") << '\n';
  }
}

}  // namespace gmhd
