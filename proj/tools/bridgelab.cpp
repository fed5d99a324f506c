#include <iostream>

#include <CLI11.hpp>

#include "bridgelab/cli.hpp"

namespace cli = bridgelab::cli;

int main(int argc, char** argv) {
  CLI::App app{"Nonlinear longitudinal modes of a suspension bridge and their torsional stability"};
  app.set_version_flag("--version", cli::kVersion);
  app.require_subcommand(1, 1);

  cli::Options opts;
  std::string branch_list;
  std::string config, out = opts.out.string(), branch_file;

  auto common = [&](CLI::App* sub, bool with_branches) {
    sub->add_option("--config", config, "JSON parameter file (defaults: Tacoma Narrows)")
        ->check(CLI::ExistingFile);
    sub->add_option("--n", opts.n, "Galerkin truncation (default: 10 for k <= 6, 16 above)")
        ->check(CLI::Range(1, 64));
    sub->add_option("--tol", opts.tol, "integrator tolerance")->check(CLI::Range(1e-13, 1e-6));
    sub->add_option("--out", out, "output directory");
    sub->add_flag("--flat-cable", opts.flat_cable, "use the flat-cable fixture");
    if (with_branches) sub->add_option("--k", branch_list, "branches, e.g. 1,3,5-7 (default 1-10)");
  };

  auto* spectrum = app.add_subcommand("spectrum", "small-energy periods of the first branches");
  common(spectrum, true);
  auto* branch = app.add_subcommand("branch", "continue nonlinear branches in the period");
  common(branch, true);
  auto* stability = app.add_subcommand("stability", "torsional stability along stored branches");
  common(stability, true);
  stability->add_option("--nu", opts.nu, "torsional components (default: n)")->check(CLI::Range(1, 64));
  stability->add_option("--branch-file", branch_file, "branch JSON to analyse");
  stability->add_option("--grid-unit", opts.grid_unit_MJ, "energy unit of the rate grid in MJ");
  auto* thresholds = app.add_subcommand("thresholds", "instability thresholds vs the reference table");
  common(thresholds, true);
  thresholds->add_option("--nu", opts.nu, "torsional components (default: n)")->check(CLI::Range(1, 64));
  thresholds->add_option("--grid-unit", opts.grid_unit_MJ, "energy unit of the rate grid in MJ");
  auto* report = app.add_subcommand("report", "full pipeline with summary against the references");
  common(report, true);
  report->add_option("--nu", opts.nu, "torsional components (default: n)")->check(CLI::Range(1, 64));
  report->add_option("--grid-unit", opts.grid_unit_MJ, "energy unit of the rate grid in MJ");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kUsage;
  }

  opts.command = app.get_subcommands().front()->get_name();
  opts.config_path = config;
  opts.out = out;
  opts.branch_file = branch_file;
  try {
    if (!branch_list.empty()) opts.ks = cli::parse_branch_list(branch_list);
  } catch (const cli::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kUsage;
  }
  return cli::run(opts, std::cout, std::cerr);
}
