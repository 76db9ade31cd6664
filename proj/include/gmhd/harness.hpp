#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gmhd/analysis.hpp"
#include "gmhd/run.hpp"

namespace gmhd {

/// Initial-condition section of a config file.
struct InitialSpec {
  std::string kind = "orszag_tang";  ///< orszag_tang | shear | single_mode | random_band_limited
  std::uint64_t seed = 1;
  double k_max = 8.0;
  double amplitude = 1.0;
  int kx = 1;
  int ky = 0;

  InitialKind to_kind() const;
};

struct RunConfig {
  Params params;
  InitialSpec initial;
  double sample_every = 0.01;
  std::string output_dir = "gmhd_out";
  std::vector<double> p_list{4.0, 6.0};
  double eps_bhat = 1e-6;  ///< direction-field floor relative to |b|_inf
  /// Snapshot cadence; 0 writes only the first and last state.
  double snapshot_every = 0.0;

  /// Throws ParameterError on any invalid value.
  void validate() const;
  RunOptions run_options() const;
};

/// Parses the flat config format:
///
///   # comment
///   params.alpha = 0.5
///   initial.kind = orszag_tang
///   run.p_list = 4, 6
///
/// One `section.key = value` per line, `#` starts a comment, blank lines are
/// ignored. Unknown keys, duplicate keys and malformed values are errors.
/// Sections: params (nu, kappa, alpha, beta, cfl, t_end, n, dt_max),
/// initial (kind, seed, k_max, amplitude, kx, ky),
/// run (sample_every, output_dir, p_list, eps_bhat, snapshot_every).
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Non-fatal remarks about a valid config (e.g. n not a power of two).
std::vector<std::string> config_warnings(const RunConfig& config);

/// One (alpha, beta) point of a scan, or the digest of a single run.
struct ScanRow {
  double alpha = 0.0;
  double beta = 0.0;
  RegimeVerdict verdict;
  double max_h2 = 0.0;
  double bkm_accum = 0.0;
  bool blowup = false;
  std::string error;  ///< set when the point could not be run at all
};

ScanRow summarize(const RunConfig& config, const Trajectory& traj);

/// Runs one point without writing files.
ScanRow run_point(const RunConfig& config);

/// start:stop:step, inclusive of stop up to 1e-9 step.
std::vector<double> parse_range(const std::string& text);

struct ScanConfig {
  RunConfig base;
  std::vector<double> alphas;
  std::vector<double> betas;
  int workers = 1;
};

/// Rows ordered by (alpha, beta) whatever the worker count.
std::vector<ScanRow> scan(const ScanConfig& config);

/// Header alpha,beta,verdict,max_h2,bkm_accum,blowup.
void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows);

/// Worker count from GMHD2D_WORKERS, or 1 when unset or invalid.
int default_workers();

// --- verification suites ---------------------------------------------------

struct CheckLine {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct SuiteResult {
  std::string suite;
  std::vector<CheckLine> checks;
  bool pass() const;
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"identities", "inequalities", "positivity", "gronwall", "classifier"};
  return names;
}

/// Throws ParameterError for an unknown suite name.
SuiteResult run_suite(const std::string& suite);

void write_suite_csv(std::ostream& out, const SuiteResult& result);

// --- commands --------------------------------------------------------------

/// Exit codes: 0 completed, 1 configuration or I/O error, 2 blow-up.
int cmd_run(const RunConfig& config, std::ostream& log);
int cmd_run_file(const std::string& config_path, std::ostream& log);
int cmd_scan(const ScanConfig& config, std::ostream& log);
int cmd_verify(const std::string& suite, const std::string& output_dir, std::ostream& log);
int cmd_classify(double alpha, double beta, std::ostream& out);

}  // namespace gmhd
