// wkcheck: config-driven checks for weighted function spaces and kernels.
//
//   wkcheck check-family --config configs/schwartz.json --out reports/
//
// Exit status: 0 all checks pass, 1 some check failed, 2 usage/config/I-O error.

#include "wk/error.hpp"
#include "wk/runner.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Weighted function space and kernel checks"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  double tol = 0.0;
  bool emit_certificate = false;
  bool quiet = false;

  const char* commands[][2] = {
      {"check-family", "Conditions (a), (c), (I), (II) on defining families"},
      {"seminorm", "Seminorm evaluations and cutoff tails"},
      {"equivalence", "Sup/L^p norm equivalence certificates and analytic checks"},
      {"nuclearity", "Pietsch-type nuclearity bounds"},
      {"kernel-diff", "Differentiation under a functional"},
      {"kernel-decompose", "Weighted separable approximation and singular value decay"},
      {"report-all", "Every check in the config"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "Run configuration (JSON)")->required();
    sub->add_option("--out", out_dir, "Report directory");
    sub->add_option("--tol", tol, "Tolerance override for every check");
    sub->add_flag("--emit-certificate", emit_certificate, "Write the constant chain of each certificate");
    sub->add_flag("--quiet", quiet, "No per-check output");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const wk::Command command = wk::command_from_string(app.get_subcommands().front()->get_name());
    const wk::RunConfig config = wk::load_config(config_path);
    wk::RunOptions options;
    if (!out_dir.empty()) options.out_dir = out_dir;
    if (app.get_subcommands().front()->count("--tol")) options.tol = tol;
    options.emit_certificate = emit_certificate;
    options.quiet = quiet;
    const wk::RunResult r = wk::run(command, config, options, std::cout);
    if (r.exit_code == 2) std::cerr << "wkcheck: " << r.error << '\n';
    return r.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "wkcheck: " << e.what() << '\n';
    return 2;
  }
}
