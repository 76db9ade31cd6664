#include "gmhd/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace gmhd {

namespace fs = std::filesystem;

// --- config -----------------------------------------------------------------

InitialKind InitialSpec::to_kind() const {
  if (kind == "orszag_tang") return OrszagTang{};
  if (kind == "shear") return Shear{};
  if (kind == "single_mode") return SingleMode{kx, ky, amplitude};
  if (kind == "random_band_limited") return RandomBandLimited{k_max, amplitude};
  throw ParameterError("unknown initial.kind '" + kind + "'");
}

void RunConfig::validate() const {
  params.validate();
  (void)initial.to_kind();
  if (initial.kind == "random_band_limited" && !(initial.k_max > 0.0 && initial.k_max <= params.n / 3.0)) {
    throw ParameterError("initial.k_max must lie in (0, n/3]");
  }
  if (!std::isfinite(initial.amplitude)) throw ParameterError("initial.amplitude must be finite");
  if (!(sample_every > 0.0) || !std::isfinite(sample_every)) throw ParameterError("run.sample_every must be > 0");
  for (double p : p_list) {
    if (std::isnan(p) || p < 1.0) throw ParameterError("run.p_list entries must be >= 1");
  }
  if (!(eps_bhat > 0.0) || !std::isfinite(eps_bhat)) throw ParameterError("run.eps_bhat must be > 0");
  if (!(snapshot_every >= 0.0) || !std::isfinite(snapshot_every)) {
    throw ParameterError("run.snapshot_every must be >= 0");
  }
  if (output_dir.empty()) throw ParameterError("run.output_dir must not be empty");
}

RunOptions RunConfig::run_options() const {
  RunOptions o;
  o.sample_every = sample_every;
  o.diagnostics.p_list = p_list;
  o.diagnostics.eps_bhat_factor = eps_bhat;
  return o;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  const char* begin = v.c_str();
  char* end = nullptr;
  const double x = std::strtod(begin, &end);
  if (end == begin || *end != '\0') throw ParameterError(key + ": '" + v + "' is not a number");
  return x;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& v) {
  Int x{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw ParameterError(key + ": '" + v + "' is not an integer");
  return x;
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  if (out.empty()) throw ParameterError(key + ": empty list");
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (eq == std::string::npos) throw ParameterError(where + "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) throw ParameterError(where + key + " has no value");
    if (!seen.insert(key).second) throw ParameterError(where + "duplicate key " + key);
    const std::string k = where + key;

    if (key == "params.nu") c.params.nu = to_double(k, value);
    else if (key == "params.kappa") c.params.kappa = to_double(k, value);
    else if (key == "params.alpha") c.params.alpha = to_double(k, value);
    else if (key == "params.beta") c.params.beta = to_double(k, value);
    else if (key == "params.cfl") c.params.cfl = to_double(k, value);
    else if (key == "params.t_end") c.params.t_end = to_double(k, value);
    else if (key == "params.dt_max") c.params.dt_max = to_double(k, value);
    else if (key == "params.n") c.params.n = to_int<int>(k, value);
    else if (key == "initial.kind") c.initial.kind = value;
    else if (key == "initial.seed") c.initial.seed = to_int<std::uint64_t>(k, value);
    else if (key == "initial.k_max") c.initial.k_max = to_double(k, value);
    else if (key == "initial.amplitude") c.initial.amplitude = to_double(k, value);
    else if (key == "initial.kx") c.initial.kx = to_int<int>(k, value);
    else if (key == "initial.ky") c.initial.ky = to_int<int>(k, value);
    else if (key == "run.sample_every") c.sample_every = to_double(k, value);
    else if (key == "run.output_dir") c.output_dir = value;
    else if (key == "run.p_list") c.p_list = to_list(k, value);
    else if (key == "run.eps_bhat") c.eps_bhat = to_double(k, value);
    else if (key == "run.snapshot_every") c.snapshot_every = to_double(k, value);
    else throw ParameterError(where + "unknown key " + key);
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<std::string> config_warnings(const RunConfig& config) {
  std::vector<std::string> w;
  const int n = config.params.n;
  if (n > 0 && (n & (n - 1)) != 0) w.push_back("n = " + std::to_string(n) + " is not a power of two");
  return w;
}

// --- runs and scans -----------------------------------------------------------

ScanRow summarize(const RunConfig& config, const Trajectory& traj) {
  ScanRow row;
  row.alpha = config.params.alpha;
  row.beta = config.params.beta;
  row.verdict = classify_regime(row.alpha, row.beta);
  for (const DiagnosticsRecord& r : traj.series.records()) row.max_h2 = std::max(row.max_h2, r.h2);
  if (!traj.series.empty()) row.bkm_accum = traj.series.records().back().bkm_accum;
  row.blowup = traj.blowup.has_value();
  return row;
}

ScanRow run_point(const RunConfig& config) {
  config.validate();
  const GmhdState initial = initial_condition(config.initial.to_kind(), Grid(config.params.n), config.initial.seed);
  return summarize(config, run(initial, config.params, config.run_options()));
}

std::vector<double> parse_range(const std::string& text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
  if (c2 == std::string::npos) throw ParameterError("range must be start:stop:step, got '" + text + "'");
  const double start = to_double("range", trim(text.substr(0, c1)));
  const double stop = to_double("range", trim(text.substr(c1 + 1, c2 - c1 - 1)));
  const double step = to_double("range", trim(text.substr(c2 + 1)));
  if (!(step > 0.0) || !std::isfinite(step)) throw ParameterError("range step must be > 0");
  if (!(stop >= start)) throw ParameterError("range is empty");
  std::vector<double> out;
  for (long i = 0;; ++i) {
    const double v = start + i * step;
    if (v > stop + 1e-9 * step) break;
    out.push_back(v);
  }
  return out;
}

std::vector<ScanRow> scan(const ScanConfig& config) {
  if (config.workers < 1) throw ParameterError("workers must be >= 1");
  if (config.alphas.empty() || config.betas.empty()) throw ParameterError("scan ranges must be nonempty");
  std::vector<RunConfig> points;
  for (double a : config.alphas) {
    for (double b : config.betas) {
      RunConfig c = config.base;
      c.params.alpha = a;
      c.params.beta = b;
      points.push_back(std::move(c));
    }
  }
  std::vector<ScanRow> rows(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        rows[i] = run_point(points[i]);
      } catch (const std::exception& e) {
        rows[i].alpha = points[i].params.alpha;
        rows[i].beta = points[i].params.beta;
        rows[i].error = e.what();
        try {
          rows[i].verdict = classify_regime(rows[i].alpha, rows[i].beta);
        } catch (const ParameterError&) {
        }
      }
    }
  };
  const int threads = std::min<int>(config.workers, static_cast<int>(points.size()));
  std::vector<std::thread> pool;
  for (int w = 1; w < threads; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  return rows;
}

void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows) {
  out << "alpha,beta,verdict,max_h2,bkm_accum,blowup\n";
  for (const ScanRow& r : rows) {
    out << format_p(r.alpha) << ',' << format_p(r.beta) << ','
        << (r.error.empty() ? to_string(r.verdict.verdict) : "error") << ',' << format_number(r.max_h2) << ','
        << format_number(r.bkm_accum) << ',' << (r.blowup ? 1 : 0) << '\n';
  }
}

int default_workers() {
  const char* env = std::getenv("GMHD2D_WORKERS");
  if (env == nullptr) return 1;
  int w = 0;
  const std::string s(env);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), w);
  if (ec != std::errc() || ptr != s.data() + s.size() || w < 1) return 1;
  return w;
}

// --- verification suites ---------------------------------------------------

bool SuiteResult::pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckLine& c) { return c.pass; });
}

namespace {

CheckLine at_most(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, value <= threshold};
}

SuiteResult identities_suite() {
  SuiteResult r{"identities", {}};
  const Grid grid(128);
  double current = 0.0, forcing = 0.0, adv_w = 0.0, adv_j = 0.0, cross = 0.0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const GmhdState s = initial_condition(RandomBandLimited{16.0, 1.0}, grid, seed);
    current = std::max(current, current_identity_residual(s).value);
    forcing = std::max(forcing, forcing_identity_residual(s).value);
    const CancellationIntegrals c = cancellation_integrals(s);
    adv_w = std::max(adv_w, c.vorticity_advection_rel);
    adv_j = std::max(adv_j, c.current_advection_rel);
    cross = std::max(cross, c.cross_coupling_rel);
  }
  r.checks.push_back(at_most("current_identity_max", current, 1e-9));
  r.checks.push_back(at_most("forcing_identity_max", forcing, 1e-9));
  r.checks.push_back(at_most("vorticity_advection_rel", adv_w, 1e-10));
  r.checks.push_back(at_most("current_advection_rel", adv_j, 1e-10));
  r.checks.push_back(at_most("cross_coupling_rel", cross, 1e-10));
  return r;
}

SuiteResult inequalities_suite() {
  SuiteResult r{"inequalities", {}};
  std::vector<ConstantReport> reports;
  for (const InequalitySpec& spec : default_inequalities()) reports.push_back(inequality_refinement(spec));
  reports.push_back(log_inequality_refinement());
  for (const ConstantReport& c : reports) r.checks.push_back({c.name + "_growth", c.growth, 0.05, c.pass});
  return r;
}

SuiteResult positivity_suite() {
  SuiteResult r{"positivity", {}};
  const std::vector<SpectralField> corpus = default_corpus(Grid(128));
  for (double alpha : {0.25, 0.5, 1.0}) {
    for (int p : {2, 4, 6}) {
      const PositivityReport rep = check_positivity(alpha, p, corpus);
      r.checks.push_back({"alpha_" + format_p(alpha) + "_p_" + std::to_string(p) + "_min_scaled", rep.min_scaled,
                          -1e-10, rep.pass});
    }
  }
  return r;
}

SuiteResult gronwall_suite() {
  SuiteResult r{"gronwall", {}};
  std::vector<double> t, one, zero, expo;
  for (int i = 0; i <= 100; ++i) {
    t.push_back(0.01 * i);
    one.push_back(1.0);
    zero.push_back(0.0);
    expo.push_back(std::exp(0.01 * i));
  }
  const GronwallReport constant = gronwall_check(t, one, zero, zero);
  r.checks.push_back({"constant_violations", double(constant.conclusion_violations), 0.0, constant.pass});
  const GronwallReport saturating = gronwall_check(t, expo, zero, one);
  r.checks.push_back({"exponential_violations", double(saturating.conclusion_violations), 0.0, saturating.pass});

  // Trajectory audit with fourth-order viscosity and no magnetic diffusion.
  Params p;
  p.alpha = 2.0;
  p.beta = 0.0;
  p.n = 128;
  p.t_end = 0.5;
  p = make_params(p);
  RunOptions o;
  o.sample_every = 0.01;
  const Trajectory traj = run(initial_condition(OrszagTang{}, Grid(p.n), 1), p, o);
  std::vector<double> tt, eta, psi, g;
  for (const DiagnosticsRecord& rec : traj.series.records()) {
    tt.push_back(rec.t);
    eta.push_back(rec.h1);
    psi.push_back(2.0 * p.nu * rec.diss_omega);
    g.push_back(rec.grad_u_linf);
  }
  const double c = fit_gronwall_constant(tt, eta, psi, g);
  r.checks.push_back({"fitted_constant", c, kInfinity, std::isfinite(c) && !traj.blowup});
  std::vector<double> phi;
  for (double v : g) phi.push_back(c * v);
  const GronwallReport audit = gronwall_check(tt, eta, psi, phi);
  r.checks.push_back({"trajectory_hypothesis_violations", double(audit.hypothesis_violations), 0.0,
                      audit.hypothesis_violations == 0});
  r.checks.push_back({"trajectory_conclusion_violations", double(audit.conclusion_violations), 0.0, audit.pass});
  return r;
}

SuiteResult classifier_suite() {
  SuiteResult r{"classifier", {}};
  struct Sample {
    double alpha, beta;
    Verdict verdict;
    std::vector<Witness> required;
    std::vector<Witness> absent;
  };
  const std::vector<Sample> samples{
      {0.5, 1.0, Verdict::ProvenRegular, {Witness::CaseI}, {}},
      {0.25, 1.6, Verdict::ProvenRegular, {Witness::CaseII}, {}},
      {2.0, 0.0, Verdict::ProvenRegular, {Witness::CaseIII}, {}},
      {0.0, 2.0, Verdict::ConditionallyRegular, {Witness::Thm2Conditional}, {Witness::RemarkCombined}},
      {1.0, 1.0, Verdict::ProvenRegular, {Witness::CaseI, Witness::WuCondition}, {}},
      {1.5, 0.5, Verdict::ProvenRegular, {Witness::WuCondition}, {}},
      {0.0, 1.5, Verdict::ConditionallyRegular, {Witness::Thm2Conditional}, {}},
      {0.1, 1.0, Verdict::Open, {}, {}},
  };
  for (const Sample& s : samples) {
    const RegimeVerdict v = classify_regime(s.alpha, s.beta);
    bool ok = v.verdict == s.verdict;
    for (Witness w : s.required) ok = ok && v.has(w);
    for (Witness w : s.absent) ok = ok && !v.has(w);
    r.checks.push_back({"point_" + format_p(s.alpha) + "_" + format_p(s.beta), ok ? 1.0 : 0.0, 1.0, ok});
  }

  // 401 x 401 grid on [0, 4]^2.
  std::vector<Verdict> grid(401 * 401);
  for (int i = 0; i <= 400; ++i) {
    for (int j = 0; j <= 400; ++j) grid[i * 401 + j] = classify_regime(i / 100.0, j / 100.0).verdict;
  }
  std::size_t monotone_failures = 0, coverage_failures = 0;
  for (int i = 0; i <= 400; ++i) {
    for (int j = 0; j <= 400; ++j) {
      if (grid[i * 401 + j] != Verdict::ProvenRegular) {
        if (i > 0 && (i + j) >= 200) ++coverage_failures;
        continue;
      }
      if (i < 400 && grid[(i + 1) * 401 + j] == Verdict::Open) ++monotone_failures;
      if (j < 400 && grid[i * 401 + j + 1] == Verdict::Open) ++monotone_failures;
    }
  }
  r.checks.push_back({"grid_monotonicity_failures", double(monotone_failures), 0.0, monotone_failures == 0});
  r.checks.push_back({"grid_coverage_failures", double(coverage_failures), 0.0, coverage_failures == 0});
  return r;
}

}  // namespace

SuiteResult run_suite(const std::string& suite) {
  if (suite == "identities") return identities_suite();
  if (suite == "inequalities") return inequalities_suite();
  if (suite == "positivity") return positivity_suite();
  if (suite == "gronwall") return gronwall_suite();
  if (suite == "classifier") return classifier_suite();
  throw ParameterError("unknown suite '" + suite + "'");
}

void write_suite_csv(std::ostream& out, const SuiteResult& result) {
  out << "suite,check,value,threshold,pass\n";
  for (const CheckLine& c : result.checks) {
    out << result.suite << ',' << c.name << ',' << format_number(c.value) << ',' << format_number(c.threshold) << ','
        << (c.pass ? "PASS" : "FAIL") << '\n';
  }
}

// --- commands --------------------------------------------------------------

namespace {

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[64];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

std::string snapshot_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%06d.bin", index);
  return buf;
}

}  // namespace

int cmd_run(const RunConfig& config, std::ostream& log) {
  try {
    config.validate();
  } catch (const ParameterError& e) {
    log << "config error: " << e.what() << '\n';
    return 1;
  }
  for (const std::string& w : config_warnings(config)) log << "warning: " << w << '\n';

  const fs::path dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    log << "cannot create output directory " << dir.string() << '\n';
    return 1;
  }

  const Params params = make_params(config.params);
  const GmhdState initial = initial_condition(config.initial.to_kind(), Grid(params.n), config.initial.seed);
  RunOptions options = config.run_options();
  int snapshot_index = 0;
  double next_snapshot = initial.t;
  double last_written = -kInfinity;
  bool write_failed = false;
  auto write_snap = [&](const GmhdState& s) {
    try {
      write_snapshot((dir / snapshot_name(snapshot_index++)).string(), s, params);
      last_written = s.t;
    } catch (const std::exception& e) {
      log << "snapshot error: " << e.what() << '\n';
      write_failed = true;
    }
  };
  options.on_sample = [&](const GmhdState& s, const DiagnosticsRecord&) {
    if (config.snapshot_every > 0.0 && s.t >= next_snapshot - 1e-12) {
      write_snap(s);
      while (next_snapshot <= s.t + 1e-12) next_snapshot += config.snapshot_every;
    } else if (snapshot_index == 0) {
      write_snap(s);
    }
  };

  const Trajectory traj = run(initial, params, options);
  if (traj.final_state.t != last_written) write_snap(traj.final_state);

  std::ofstream csv(dir / "diagnostics.csv");
  write_diagnostics_csv(csv, traj.series);
  const ScanRow row = summarize(config, traj);
  std::ofstream summary(dir / "summary.txt");
  const auto& recs = traj.series.records();
  summary << "generated: " << timestamp() << '\n'
          << "nu: " << format_number(params.nu) << '\n'
          << "kappa: " << format_number(params.kappa) << '\n'
          << "alpha: " << format_number(params.alpha) << '\n'
          << "beta: " << format_number(params.beta) << '\n'
          << "n: " << params.n << '\n'
          << "initial: " << config.initial.kind << '\n'
          << "regime: " << format_verdict(row.verdict) << '\n'
          << "steps: " << traj.steps << '\n'
          << "final_time: " << format_number(traj.final_state.t) << '\n'
          << "initial_energy: " << (recs.empty() ? "nan" : format_number(recs.front().energy)) << '\n'
          << "final_energy: " << (recs.empty() ? "nan" : format_number(recs.back().energy)) << '\n'
          << "max_h2: " << format_number(row.max_h2) << '\n'
          << "bkm_accum: " << format_number(row.bkm_accum) << '\n'
          << "snapshots: " << snapshot_index << '\n'
          << "blowup: " << (traj.blowup ? "yes at t = " + format_number(traj.blowup->time) : "no") << '\n';
  if (!csv || !summary || write_failed) {
    log << "failed to write outputs in " << dir.string() << '\n';
    return 1;
  }
  if (traj.blowup) {
    log << "blow-up: " << traj.blowup->message << '\n';
    return 2;
  }
  log << "completed t = " << format_number(traj.final_state.t) << " in " << traj.steps << " steps\n";
  return 0;
}

int cmd_run_file(const std::string& config_path, std::ostream& log) {
  RunConfig config;
  try {
    config = load_config(config_path);
  } catch (const ParameterError& e) {
    log << "config error: " << e.what() << '\n';
    return 1;
  }
  return cmd_run(config, log);
}

int cmd_scan(const ScanConfig& config, std::ostream& log) {
  try {
    config.base.validate();
  } catch (const ParameterError& e) {
    log << "config error: " << e.what() << '\n';
    return 1;
  }
  std::vector<ScanRow> rows;
  try {
    rows = scan(config);
  } catch (const ParameterError& e) {
    log << "scan error: " << e.what() << '\n';
    return 1;
  }
  const fs::path dir(config.base.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream csv(dir / "scan.csv");
  write_scan_csv(csv, rows);
  if (!csv) {
    log << "cannot write " << (dir / "scan.csv").string() << '\n';
    return 1;
  }
  bool blowup = false, failed = false;
  for (const ScanRow& r : rows) {
    blowup = blowup || r.blowup;
    if (!r.error.empty()) {
      failed = true;
      log << "point (" << format_p(r.alpha) << ", " << format_p(r.beta) << ") failed: " << r.error << '\n';
    }
  }
  log << rows.size() << " points written to " << (dir / "scan.csv").string() << '\n';
  if (blowup) return 2;
  return failed ? 1 : 0;
}

int cmd_verify(const std::string& suite, const std::string& output_dir, std::ostream& log) {
  SuiteResult result;
  try {
    result = run_suite(suite);
  } catch (const ParameterError& e) {
    log << e.what() << '\n';
    return 1;
  }
  for (const CheckLine& c : result.checks) {
    log << (c.pass ? "PASS " : "FAIL ") << result.suite << '/' << c.name << " = " << c.value
        << " (threshold " << c.threshold << ")\n";
  }
  std::error_code ec;
  fs::create_directories(output_dir, ec);
  std::ofstream csv(fs::path(output_dir) / ("verify_" + suite + ".csv"));
  write_suite_csv(csv, result);
  if (!csv) {
    log << "cannot write report in " << output_dir << '\n';
    return 1;
  }
  return result.pass() ? 0 : 1;
}

int cmd_classify(double alpha, double beta, std::ostream& out) {
  try {
    out << format_verdict(classify_regime(alpha, beta)) << '\n';
  } catch (const ParameterError& e) {
    out << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace gmhd
