#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "dpmbq/errors.hpp"
#include "dpmbq/version.hpp"

namespace {

void write_report(const std::string& report, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << report;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw dpmbq::InvalidInput("cannot write '" + out_path + "'");
  out << report;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Posterior distributions over integrals estimated from sampled points"};
  app.set_version_flag("--version", dpmbq::kVersion);
  app.require_subcommand(1);

  dpmbq::cli::EstimateOptions estimate;
  std::string estimate_out;
  CLI::App* cmd_estimate = app.add_subcommand(
      "estimate", "Posterior over the integral of f from a sample file");
  cmd_estimate->add_option("--input", estimate.input_path, "Sample file (CSV or JSON)")
      ->required();
  cmd_estimate->add_option("--format", estimate.format, "Input format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd_estimate->add_option("--draws", estimate.draws, "Posterior draws");
  cmd_estimate->add_option("--seed", estimate.seed, "RNG seed");
  cmd_estimate->add_option("--levels", estimate.levels, "Credible-interval levels")
      ->delimiter(',');
  cmd_estimate->add_flag("--standardize-f", estimate.standardize_f,
                         "Centre and scale f before fitting");
  cmd_estimate->add_option("--truncation", estimate.truncation,
                           "Stick-breaking truncation");
  cmd_estimate->add_option("--burn-in", estimate.burn_in_sweeps, "Burn-in sweeps");
  cmd_estimate->add_option("--between", estimate.between_sweeps,
                           "Sweeps between draws");
  cmd_estimate->add_option("--out", estimate_out, "Output path (default stdout)");

  dpmbq::cli::CoverageOptions coverage;
  std::string coverage_out;
  CLI::App* cmd_coverage = app.add_subcommand(
      "coverage", "Credible/confidence interval coverage experiment");
  cmd_coverage->add_option("--task", coverage.task_path, "Task JSON")->required();
  cmd_coverage->add_option("--trials", coverage.trials, "Trials per n (dpmbq)");
  cmd_coverage->add_option("--baseline-trials", coverage.baseline_trials,
                           "Trials per n (t-interval)");
  cmd_coverage->add_option("--n", coverage.ns, "Sample sizes")
      ->required()
      ->delimiter(',');
  cmd_coverage->add_option("--level", coverage.level, "Interval level");
  cmd_coverage->add_option("--seed", coverage.seed, "RNG seed");
  cmd_coverage->add_option("--draws", coverage.draws, "Posterior draws per trial");
  cmd_coverage->add_option("--truncation", coverage.truncation,
                           "Stick-breaking truncation");
  cmd_coverage->add_option("--burn-in", coverage.burn_in_sweeps, "Burn-in sweeps");
  cmd_coverage->add_option("--between", coverage.between_sweeps,
                           "Sweeps between draws");
  cmd_coverage->add_option("--out", coverage_out, "Output path (default stdout)");

  dpmbq::cli::ConvergenceOptions convergence;
  std::string convergence_out;
  CLI::App* cmd_convergence =
      app.add_subcommand("convergence", "Wasserstein distance versus sample size");
  cmd_convergence->add_option("--task", convergence.task_path, "Task JSON")->required();
  cmd_convergence->add_option("--n-grid", convergence.n_grid, "Ascending sample sizes")
      ->required()
      ->delimiter(',');
  cmd_convergence->add_option("--reps", convergence.reps, "Repetitions per n");
  cmd_convergence->add_option("--seed", convergence.seed, "RNG seed");
  cmd_convergence->add_option("--draws", convergence.draws, "Posterior draws per run");
  cmd_convergence->add_option("--truncation", convergence.truncation,
                              "Stick-breaking truncation");
  cmd_convergence->add_option("--burn-in", convergence.burn_in_sweeps,
                              "Burn-in sweeps");
  cmd_convergence->add_option("--between", convergence.between_sweeps,
                              "Sweeps between draws");
  cmd_convergence->add_option("--out", convergence_out, "Output path (default stdout)");

  dpmbq::cli::BaselineOptions baseline;
  CLI::App* cmd_baseline = app.add_subcommand(
      "baseline", "Student-t interval for the sample mean of f");
  cmd_baseline->add_option("--input", baseline.input_path, "Sample file (CSV or JSON)")
      ->required();
  cmd_baseline->add_option("--format", baseline.format, "Input format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd_baseline->add_option("--level", baseline.level, "Interval level");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_estimate->parsed())
      write_report(dpmbq::cli::estimate_report(estimate), estimate_out);
    else if (cmd_coverage->parsed())
      write_report(dpmbq::cli::coverage_report(coverage), coverage_out);
    else if (cmd_convergence->parsed())
      write_report(dpmbq::cli::convergence_report(convergence), convergence_out);
    else if (cmd_baseline->parsed())
      write_report(dpmbq::cli::baseline_report(baseline), "");
  } catch (const dpmbq::InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const dpmbq::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
