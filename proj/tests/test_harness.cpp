#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gmhd/harness.hpp"

using namespace gmhd;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("gmhd_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

RunConfig small_config(const fs::path& dir) {
  RunConfig c;
  c.params.n = 32;
  c.params.t_end = 0.1;
  c.sample_every = 0.05;
  c.output_dir = dir.string();
  return c;
}

}  // namespace

TEST_CASE("parse_config") {
  const RunConfig c = parse_config(
      "# comment\n"
      "params.alpha = 0.5\n"
      "params.beta=1.5   # trailing\n"
      "\n"
      "params.n = 64\n"
      "initial.kind = random_band_limited\n"
      "initial.seed = 7\n"
      "run.p_list = 4, 6, inf\n"
      "run.output_dir = out dir\n");
  CHECK(c.params.alpha == 0.5);
  CHECK(c.params.beta == 1.5);
  CHECK(c.params.n == 64);
  CHECK(c.params.nu == 1.0);
  CHECK(c.initial.kind == "random_band_limited");
  CHECK(c.initial.seed == 7);
  REQUIRE(c.p_list.size() == 3);
  CHECK(std::isinf(c.p_list[2]));
  CHECK(c.output_dir == "out dir");

  CHECK_THROWS_AS(parse_config("params.gamma = 1\n"), ParameterError);
  CHECK_THROWS_AS(parse_config("params.alpha = 1\nparams.alpha = 2\n"), ParameterError);
  CHECK_THROWS_AS(parse_config("params.alpha = one\n"), ParameterError);
  CHECK_THROWS_AS(parse_config("params.alpha\n"), ParameterError);
  CHECK_THROWS_AS(parse_config("params.n = 12.5\n"), ParameterError);
  CHECK_THROWS_AS(parse_config("initial.kind = vortex\n").initial.to_kind(), ParameterError);

  RunConfig warn = parse_config("params.n = 96\n");
  CHECK(config_warnings(warn).size() == 1);
  CHECK(config_warnings(parse_config("")).empty());

  RunConfig bad;
  bad.sample_every = 0.0;
  CHECK_THROWS_AS(bad.validate(), ParameterError);
  bad = RunConfig{};
  bad.p_list = {0.5};
  CHECK_THROWS_AS(bad.validate(), ParameterError);
}

TEST_CASE("parse_range") {
  const std::vector<double> r = parse_range("0.5:1.5:0.5");
  REQUIRE(r.size() == 3);
  CHECK(r[2] == doctest::Approx(1.5));
  CHECK(parse_range("1:1:1").size() == 1);
  CHECK(parse_range("0:1:0.1").size() == 11);
  CHECK_THROWS_AS(parse_range("0:1:0"), ParameterError);
  CHECK_THROWS_AS(parse_range("1:0:0.1"), ParameterError);
  CHECK_THROWS_AS(parse_range("0:1"), ParameterError);
}

TEST_CASE("cmd_run: defaults give a dissipative run") {
  const fs::path dir = fresh_dir("run_default");
  RunConfig c;
  c.output_dir = dir.string();
  std::ostringstream log;
  CHECK(cmd_run(c, log) == 0);
  const std::vector<std::string> rows = lines(slurp(dir / "diagnostics.csv"));
  CHECK(rows.size() >= 3);
  CHECK(rows.size() == 102);
  auto energy = [](const std::string& row) {
    const auto a = row.find(','), b = row.find(',', a + 1);
    return std::stod(row.substr(a + 1, b - a - 1));
  };
  CHECK(energy(rows.back()) < energy(rows[1]));
  CHECK(fs::exists(dir / "snapshot_000000.bin"));
  CHECK(fs::exists(dir / "snapshot_000001.bin"));
  const std::string summary = slurp(dir / "summary.txt");
  CHECK(summary.find("regime: ProvenRegular [CaseI; WuCondition]") != std::string::npos);
  CHECK(summary.find("blowup: no\n") != std::string::npos);
  const Snapshot last = read_snapshot((dir / "snapshot_000001.bin").string());
  CHECK(last.state.t == 1.0);
  fs::remove_all(dir);
}

TEST_CASE("cmd_run: t_end = 0 and invalid configs") {
  const fs::path dir = fresh_dir("run_zero");
  RunConfig c = small_config(dir);
  c.params.t_end = 0.0;
  std::ostringstream log;
  CHECK(cmd_run(c, log) == 0);
  CHECK(lines(slurp(dir / "diagnostics.csv")).size() == 2);
  CHECK(fs::exists(dir / "snapshot_000000.bin"));
  CHECK_FALSE(fs::exists(dir / "snapshot_000001.bin"));
  fs::remove_all(dir);

  const fs::path bad = fresh_dir("run_bad");
  RunConfig n = small_config(bad);
  n.params.alpha = -1.0;
  CHECK(cmd_run(n, log) == 1);
  CHECK_FALSE(fs::exists(bad));

  CHECK(cmd_run_file((bad / "missing.cfg").string(), log) == 1);
  CHECK_FALSE(fs::exists(bad));
}

TEST_CASE("cmd_run: snapshot cadence and reproducibility") {
  const fs::path a = fresh_dir("run_a"), b = fresh_dir("run_b");
  RunConfig c = small_config(a);
  c.snapshot_every = 0.05;
  std::ostringstream log;
  REQUIRE(cmd_run(c, log) == 0);
  c.output_dir = b.string();
  REQUIRE(cmd_run(c, log) == 0);
  CHECK(fs::exists(a / "snapshot_000002.bin"));
  CHECK_FALSE(fs::exists(a / "snapshot_000003.bin"));
  CHECK(slurp(a / "diagnostics.csv") == slurp(b / "diagnostics.csv"));
  CHECK(slurp(a / "snapshot_000002.bin") == slurp(b / "snapshot_000002.bin"));
  std::vector<std::string> sa = lines(slurp(a / "summary.txt")), sb = lines(slurp(b / "summary.txt"));
  REQUIRE(sa.size() == sb.size());
  CHECK(sa.front().rfind("generated: ", 0) == 0);
  sa.erase(sa.begin());
  sb.erase(sb.begin());
  CHECK(sa == sb);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("cmd_run: blow-up exits 2 with partial outputs") {
  const fs::path dir = fresh_dir("run_blowup");
  RunConfig c = small_config(dir);
  c.initial.kind = "random_band_limited";
  c.initial.amplitude = 1e300;
  std::ostringstream log;
  CHECK(cmd_run(c, log) == 2);
  CHECK(fs::exists(dir / "diagnostics.csv"));
  CHECK(slurp(dir / "summary.txt").find("blowup: yes") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("scan") {
  ScanConfig s;
  s.base = small_config(fresh_dir("scan"));
  s.alphas = {1.0};
  s.betas = {1.0};
  const std::vector<ScanRow> one = scan(s);
  REQUIRE(one.size() == 1);
  RunConfig single = s.base;
  const ScanRow direct = run_point(single);
  CHECK(one[0].max_h2 == direct.max_h2);
  CHECK(one[0].bkm_accum == direct.bkm_accum);
  CHECK(one[0].verdict.verdict == Verdict::ProvenRegular);

  s.alphas = {0.5, 1.0};
  s.betas = {0.5, 1.0, 1.5};
  s.workers = 1;
  std::ostringstream w1, w4;
  write_scan_csv(w1, scan(s));
  s.workers = 4;
  write_scan_csv(w4, scan(s));
  CHECK(w1.str() == w4.str());
  const std::vector<std::string> rows = lines(w1.str());
  REQUIRE(rows.size() == 7);
  CHECK(rows[0] == "alpha,beta,verdict,max_h2,bkm_accum,blowup");
  CHECK(rows[1].rfind("0.5,0.5,Open,", 0) == 0);
  CHECK(rows[6].rfind("1,1.5,ProvenRegular,", 0) == 0);

  // Per-point errors are recorded and the scan continues.
  s.alphas = {-1.0, 1.0};
  s.betas = {1.0};
  const std::vector<ScanRow> mixed = scan(s);
  REQUIRE(mixed.size() == 2);
  CHECK_FALSE(mixed[0].error.empty());
  CHECK(mixed[1].error.empty());

  const fs::path dir = fresh_dir("scan_cmd");
  s.base.output_dir = dir.string();
  s.alphas = {1.0};
  std::ostringstream log;
  CHECK(cmd_scan(s, log) == 0);
  CHECK(lines(slurp(dir / "scan.csv")).size() == 2);
  fs::remove_all(dir);
}

TEST_CASE("verify and classify commands") {
  const fs::path dir = fresh_dir("verify");
  std::ostringstream log;
  CHECK(cmd_verify("nonsense", dir.string(), log) == 1);
  CHECK(cmd_verify("classifier", dir.string(), log) == 0);
  CHECK(fs::exists(dir / "verify_classifier.csv"));
  fs::remove_all(dir);

  std::ostringstream a, b, c, d;
  CHECK(cmd_classify(2.0, 0.0, a) == 0);
  CHECK(a.str() == "ProvenRegular [CaseIII]\n");
  CHECK(cmd_classify(0.0, 2.0, b) == 0);
  CHECK(b.str() == "ConditionallyRegular [Thm2Conditional; excluded from combined regime alpha+beta>=2]\n");
  CHECK(cmd_classify(0.1, 1.0, c) == 0);
  CHECK(c.str() == "Open\n");
  CHECK(cmd_classify(-1.0, 1.0, d) == 1);
}

TEST_CASE("default_workers") {
  setenv("GMHD2D_WORKERS", "3", 1);
  CHECK(default_workers() == 3);
  setenv("GMHD2D_WORKERS", "zero", 1);
  CHECK(default_workers() == 1);
  unsetenv("GMHD2D_WORKERS");
  CHECK(default_workers() == 1);
}
