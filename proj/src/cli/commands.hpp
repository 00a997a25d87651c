#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dpmbq/sampler.hpp"
#include "dpmbq/testbed.hpp"

namespace dpmbq::cli {

// Commands build their full report in memory and return it, so a failure
// never leaves partial output behind. Reports embed the seed, the resolved
// configuration, the artifact version and the input content hash, and carry
// no timestamps: re-running with the same arguments reproduces them byte
// for byte.

struct EstimateOptions {
  std::string input_path;
  std::string format;  // "", "csv" or "json"
  int draws = 500;
  std::uint64_t seed = 0;
  std::vector<double> levels{0.5, 0.9};
  bool standardize_f = false;
  int truncation = 500;
  int burn_in_sweeps = 100;
  int between_sweeps = 1;
};

std::string estimate_report(const EstimateOptions& options);

struct BaselineOptions {
  std::string input_path;
  std::string format;
  double level = 0.5;
};

std::string baseline_report(const BaselineOptions& options);

struct CoverageOptions {
  std::string task_path;
  std::vector<int> ns;
  int trials = 100;
  int baseline_trials = 1000;
  double level = 0.5;
  std::uint64_t seed = 0;
  int draws = 500;
  int truncation = 500;
  int burn_in_sweeps = 100;
  int between_sweeps = 1;
};

std::string coverage_report(const CoverageOptions& options);

struct ConvergenceOptions {
  std::string task_path;
  std::vector<int> n_grid;
  int reps = 20;
  std::uint64_t seed = 0;
  int draws = 500;
  int truncation = 500;
  int burn_in_sweeps = 100;
  int between_sweeps = 1;
};

// w_override, when set, replaces the sampler-backed Wasserstein computation
// with w_override(n, rep); used to test the fitting pipeline in isolation.
std::string convergence_report(const ConvergenceOptions& options,
                               const std::function<double(int, int)>& w_override = {});

// Mid-level experiment loops, shared with the acceptance suite.

struct CoverageRow {
  std::string method;  // "dpmbq" or "t-interval"
  int n = 0;
  int trials = 0;
  double rate = 0.0;
  double se = 0.0;
};

std::vector<CoverageRow> coverage_experiment(const IntegrationTask& task,
                                             const std::vector<int>& ns, int trials,
                                             int baseline_trials, double level,
                                             std::uint64_t seed,
                                             const SamplerConfig& base_config);

struct ConvergencePoint {
  int n = 0;
  int rep = 0;
  double wasserstein = 0.0;
};

std::vector<ConvergencePoint> convergence_experiment(
    const IntegrationTask& task, const std::vector<int>& n_grid, int reps,
    std::uint64_t seed, const SamplerConfig& base_config,
    const std::function<double(int, int)>& w_override = {});

}  // namespace dpmbq::cli
