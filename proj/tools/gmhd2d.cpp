// Command-line front end: run, scan, verify, classify.
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gmhd/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral 2D generalized MHD with fractional dissipation"};
  app.require_subcommand(1);

  std::string run_config;
  auto* run = app.add_subcommand("run", "integrate one configuration");
  run->add_option("--config", run_config, "config file")->required();

  std::string scan_config, alpha_range, beta_range;
  int workers = gmhd::default_workers();
  auto* scan = app.add_subcommand("scan", "run a grid of (alpha, beta) points");
  scan->add_option("--config", scan_config, "base config file")->required();
  scan->add_option("--alpha", alpha_range, "alpha range start:stop:step")->required();
  scan->add_option("--beta", beta_range, "beta range start:stop:step")->required();
  scan->add_option("--workers", workers, "concurrent runs (default GMHD2D_WORKERS or 1)");

  std::string suite, verify_dir = ".";
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--suite", suite, "identities | inequalities | positivity | gronwall | classifier")->required();
  verify->add_option("--output-dir", verify_dir, "directory for the CSV report");

  double alpha = 0.0, beta = 0.0;
  auto* classify = app.add_subcommand("classify", "print the regime verdict for (alpha, beta)");
  classify->add_option("--alpha", alpha)->required();
  classify->add_option("--beta", beta)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) return gmhd::cmd_run_file(run_config, std::cerr);
    if (*scan) {
      gmhd::ScanConfig sc;
      try {
        sc.base = gmhd::load_config(scan_config);
        sc.alphas = gmhd::parse_range(alpha_range);
        sc.betas = gmhd::parse_range(beta_range);
      } catch (const gmhd::ParameterError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
      }
      sc.workers = workers;
      return gmhd::cmd_scan(sc, std::cerr);
    }
    if (*verify) return gmhd::cmd_verify(suite, verify_dir, std::cout);
    if (*classify) return gmhd::cmd_classify(alpha, beta, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
