// Acceptance checks. One line per criterion: "criterion N: PASS|FAIL <details>".

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "gmhd/harness.hpp"

using namespace gmhd;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome suite_outcome(const std::string& name) {
  const SuiteResult r = run_suite(name);
  std::size_t failed = 0;
  std::string first;
  for (const CheckLine& c : r.checks)
    if (!c.pass) {
      if (failed++ == 0) first = " first failure " + c.name + "=" + fmt("%.3g", c.value);
    }
  return {r.pass(), std::to_string(r.checks.size()) + " checks, " + std::to_string(failed) + " failed" + first};
}

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const Grid g(128);
  const double kmax = 128.0 / 3.0;
  double worst = 0.0;
  for (double s : {0.5, 1.0, 1.3, 2.0, 4.0}) {
    SpectralField f(g);
    for (int col = 0; col < g.n(); ++col)
      for (int kx = 0; kx < g.nkx(); ++kx) f.coeffs(kx, col) = Complex(1.0 + 0.01 * kx, 0.5 - 0.003 * col);
    const SpectralField out = fractional_power(f, s);
    for (int col = 0; col < g.n(); ++col)
      for (int kx = 0; kx < g.nkx(); ++kx) {
        const int ky = g.ky(col);
        const double k2 = wavenumber_squared(kx, ky);
        if (k2 == 0.0 || k2 > kmax * kmax) continue;
        const Complex expect = std::pow(k2, s / 2) * f.coeffs(kx, col);
        worst = std::max(worst, std::abs(out.coeffs(kx, col) - expect) / std::abs(expect));
      }
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-12 && secs < 1.0, "max rel err " + fmt("%.2e", worst) + " (tol 1e-12), " + fmt("%.3f", secs) + " s"};
}

Outcome criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o = suite_outcome("identities");
  const double secs = seconds_since(t0);
  o.pass = o.pass && secs < 30.0;
  o.detail += ", " + fmt("%.1f", secs) + " s";
  return o;
}

Outcome criterion3() {
  Params p;
  p.n = 128;
  p.dt_max = 1e-3;
  RunOptions o;
  o.sample_every = 1e-3;
  const Trajectory tr = run(initial_condition(OrszagTang{}, Grid(128), 0), p, o);
  const double residual = tr.blowup ? INFINITY : energy_balance_residual(tr.series);

  Params ideal;
  ideal.n = 256;
  ideal.nu = ideal.kappa = 0.0;
  ideal.t_end = 0.5;
  RunOptions io;
  io.sample_every = 0.05;
  const Trajectory it = run(initial_condition(OrszagTang{}, Grid(256), 0), ideal, io);
  double de = 0, dh = 0, da = 0;
  const DiagnosticsRecord& first = it.series.records().front();
  for (const DiagnosticsRecord& r : it.series.records()) {
    de = std::max(de, std::abs(r.energy - first.energy) / std::abs(first.energy));
    dh = std::max(dh, std::abs(r.cross_helicity - first.cross_helicity) / std::abs(first.cross_helicity));
    da = std::max(da, std::abs(r.a_l2sq - first.a_l2sq) / std::abs(first.a_l2sq));
  }
  const bool ok = !tr.blowup && !it.blowup && residual < 1e-6 && de < 1e-6 && dh < 1e-6 && da < 1e-6;
  return {ok, "balance residual " + fmt("%.2e", residual) + " (tol 1e-6); ideal drift energy " + fmt("%.1e", de) +
                  " cross helicity " + fmt("%.1e", dh) + " a^2 " + fmt("%.1e", da) + " (tol 1e-6)"};
}

double state_distance(const GmhdState& x, const GmhdState& y) {
  return std::hypot(homogeneous_sobolev_norm(x.omega_hat - y.omega_hat, 0.0),
                    homogeneous_sobolev_norm(x.a_hat - y.a_hat, 0.0));
}

Outcome criterion4() {
  double worst = 0.0;
  for (double alpha : {0.5, 1.0, 2.0}) {
    Params p;
    p.n = 64;
    p.alpha = alpha;
    RunOptions o;
    o.sample_every = 0.1;
    const Trajectory tr = run(initial_condition(Shear{}, Grid(64), 0), p, o);
    const PhysicalField w = to_physical(tr.final_state.omega_hat);
    const PhysicalField expect =
        PhysicalField::sample(Grid(64), [](double, double y) { return std::exp(-1.0) * std::cos(y); });
    worst = std::max(worst, (w.values - expect.values).abs().maxCoeff());
    if (tr.final_state.t != 1.0) worst = INFINITY;
  }

  Params p;
  p.n = 128;
  const GmhdState init = initial_condition(OrszagTang{}, Grid(128), 0);
  auto integrate = [&](int steps) {
    GmhdState s = init;
    const LinearRates rates = linear_rates(Grid(128), make_params(p));
    for (int i = 0; i < steps; ++i) s = step(s, p, rates, 0.25 / steps);
    return s;
  };
  const GmhdState s25 = integrate(25), s50 = integrate(50), s100 = integrate(100);
  const double order = std::log2(state_distance(s25, s50) / state_distance(s50, s100));
  return {worst < 1e-10 && order >= 3.8,
          "shear max err " + fmt("%.2e", worst) + " (tol 1e-10); self-convergence order " + fmt("%.3f", order) +
              " (min 3.8)"};
}

Outcome criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<SpectralField> corpus = default_corpus(Grid(128));
  bool ok = true;
  double worst = INFINITY;
  for (double alpha : {0.25, 0.5, 1.0})
    for (int p : {2, 4, 6}) {
      const PositivityReport r = check_positivity(alpha, p, corpus);
      ok = ok && r.pass;
      worst = std::min(worst, r.min_scaled);
    }
  const double secs = seconds_since(t0);
  return {ok && secs < 60.0, "9 (alpha, p) pairs over " + std::to_string(corpus.size()) +
                                 " fields, min scaled integral " + fmt("%.3g", worst) + ", " + fmt("%.1f", secs) + " s"};
}

Outcome criterion6() {
  std::vector<ConstantReport> reports;
  for (const InequalitySpec& s : default_inequalities()) reports.push_back(inequality_refinement(s));
  reports.push_back(log_inequality_refinement());
  bool ok = true;
  double worst = -INFINITY;
  std::string failed;
  for (const ConstantReport& r : reports) {
    ok = ok && r.pass;
    worst = std::max(worst, r.growth);
    if (!r.pass) failed += " " + r.name;
  }
  return {ok, std::to_string(reports.size()) + " inequalities, max growth 128->256 " + fmt("%.4f", worst) +
                  " (tol 0.05)" + (failed.empty() ? "" : ", failing:" + failed)};
}

Outcome criterion7() {
  const Case2Exponents e = exponents_case2(0.4, 5.0);
  const double point = std::max({std::abs(e.xi - 0.2), std::abs(e.eta - 0.5), std::abs(e.a - 1.0 / 7.0),
                                 std::abs(e.p - 25.0 / 9.0)});
  double worst = 0.0;
  for (int i = 0; i < 10; ++i)
    for (int k = 0; k < 10; ++k) {
      const double alpha = 0.02 + 0.047 * i;
      const double p1 = (1.0 / alpha) * (1.05 + 0.5 * k);
      worst = std::max(worst, std::abs(case2_identity_defect(alpha, p1, exponents_case2(alpha, p1))));
    }
  return {point < 1e-12 && worst < 1e-12,
          "worked point err " + fmt("%.1e", point) + ", identity defect over 100 points " + fmt("%.1e", worst) +
              " (tol 1e-12)"};
}

Outcome criterion8() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o = suite_outcome("classifier");
  const double secs = seconds_since(t0);
  o.pass = o.pass && secs < 5.0;
  o.detail += ", " + fmt("%.2f", secs) + " s";
  return o;
}

Outcome criterion9() {
  ScanConfig cfg;
  cfg.alphas = {0.5, 1.0, 1.5};
  cfg.betas = {0.5, 1.0, 1.5};
  cfg.base.output_dir = (std::filesystem::temp_directory_path() / "gmhd_acceptance_scan").string();
  cfg.workers = 1;
  std::ostringstream log;
  const int exit_code = cmd_scan(cfg, log);
  const std::vector<ScanRow> rows1 = scan(cfg);
  cfg.workers = 4;
  const std::vector<ScanRow> rows4 = scan(cfg);
  std::ostringstream a, b;
  write_scan_csv(a, rows1);
  write_scan_csv(b, rows4);
  std::filesystem::remove_all(cfg.base.output_dir);

  bool all_regular = rows1.size() == 9, bounded = true, no_blowup = true;
  std::string not_regular;
  double max_bkm = 0.0;
  for (const ScanRow& r : rows1) {
    if (r.verdict.verdict != Verdict::ProvenRegular) {
      all_regular = false;
      not_regular += " (" + format_number(r.alpha) + "," + format_number(r.beta) + ")=" + to_string(r.verdict.verdict);
    }
    bounded = bounded && std::isfinite(r.bkm_accum) && r.error.empty();
    no_blowup = no_blowup && !r.blowup;
    max_bkm = std::max(max_bkm, r.bkm_accum);
  }
  const bool deterministic = a.str() == b.str();
  return {exit_code == 0 && all_regular && bounded && no_blowup && deterministic,
          "exit " + std::to_string(exit_code) + ", no blow-up " + (no_blowup ? "yes" : "no") + ", max bkm_accum " +
              fmt("%.3f", max_bkm) + ", deterministic " + (deterministic ? "yes" : "no") + ", all ProvenRegular " +
              (all_regular ? "yes" : "no:" + not_regular)};
}

Outcome criterion10() {
  Params p;
  p.alpha = 0.25;
  p.beta = 1.6;
  RunOptions o;
  o.diagnostics.p_list = {6.0};
  const Trajectory tr = run(initial_condition(OrszagTang{}, Grid(p.n), 0), p, o);
  const LpBoundReport r = lp_vorticity_bound_check(tr.series, 6.0);
  return {!tr.blowup && r.pass && tr.final_state.t == 1.0,
          std::to_string(r.excess.size()) + " intervals, " + std::to_string(r.violations) + " violations, max excess " +
              fmt("%.3e", r.max_excess)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::function<Outcome()> criteria[] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                               criterion6, criterion7, criterion8, criterion9, criterion10};
  bool all = true;
  for (int i = 1; i <= 10; ++i) {
    if (only != 0 && i != only) continue;
    Outcome o;
    try {
      o = criteria[i - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << i << ": " << (o.pass ? "PASS" : "FAIL") << ' ' << o.detail << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
