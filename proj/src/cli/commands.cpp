#include "cli/commands.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "cli/io.hpp"
#include "dpmbq/dpmbq.hpp"

namespace dpmbq::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

// Substream tags; combined with the user seed via substream_seed.
constexpr std::uint64_t kDataStream = 0;
constexpr std::uint64_t kSamplerStream = 1;
constexpr std::uint64_t kBaselineStream = 2;

ordered_json priors_meta(const HyperPriors& priors) {
  return ordered_json{{"lengthscale_shape", priors.lengthscale_shape},
                      {"lengthscale_rate", priors.lengthscale_rate},
                      {"concentration_rate", priors.concentration_rate},
                      {"amplitude", priors.amplitude},
                      {"base",
                       {{"location", priors.base.location},
                        {"precision_scale", priors.base.precision_scale},
                        {"shape", priors.base.shape},
                        {"rate", priors.base.rate}}}};
}

ordered_json sampler_meta(int draws, int truncation, int burn_in, int between) {
  return ordered_json{{"draws", draws},
                      {"truncation", truncation},
                      {"burn_in_sweeps", burn_in},
                      {"between_sweeps", between},
                      {"priors", priors_meta(HyperPriors{})}};
}

std::string meta_comment(const ordered_json& meta) {
  return "# meta " + meta.dump() + "\n";
}

void check_positive(int value, const char* what) {
  if (value < 1) throw InvalidInput(std::string(what) + " must be at least 1");
}

double draws_sd(const Eigen::VectorXd& draws) {
  if (draws.size() < 2) return 0.0;
  const double mean = draws.mean();
  return std::sqrt((draws.array() - mean).square().sum() /
                   static_cast<double>(draws.size() - 1));
}

}  // namespace

std::string estimate_report(const EstimateOptions& options) {
  for (double level : options.levels)
    if (!(level > 0.0) || !(level < 1.0))
      throw InvalidInput("levels must lie in (0, 1)");
  if (options.levels.empty()) throw InvalidInput("need at least one level");

  std::string content;
  std::string resolved_format;
  SampleSet<double> samples =
      load_sample_set(options.input_path, options.format, &content, &resolved_format);

  // Opt-in affine standardization of f: fit on centred/scaled values, then
  // map the posterior draws back through the same affine transform.
  double shift = 0.0;
  double scale = 1.0;
  if (options.standardize_f) {
    shift = samples.values.mean();
    const double sd = draws_sd(samples.values);
    scale = sd > 0.0 ? sd : 1.0;
    samples.values = ((samples.values.array() - shift) / scale).matrix();
  }

  SamplerConfig config;
  config.outer_draws = options.draws;
  config.truncation = options.truncation;
  config.burn_in_sweeps = options.burn_in_sweeps;
  config.between_sweeps = options.between_sweeps;
  config.seed = options.seed;

  IntegralPosterior posterior = sample_integral_posterior(samples, HyperPriors{}, config);
  Eigen::VectorXd draws = posterior.draws;
  if (options.standardize_f)
    draws = (shift + scale * draws.array()).matrix();

  ordered_json intervals = ordered_json::object();
  for (double level : options.levels) {
    const Interval ci = central_credible_interval(draws, level);
    intervals[format_double(level)] = {ci.lo, ci.hi};
  }

  ordered_json report;
  report["draws"] = std::vector<double>(draws.data(), draws.data() + draws.size());
  report["mean"] = draws.mean();
  report["sd"] = draws_sd(draws);
  report["intervals"] = intervals;
  report["meta"] = {
      {"command", "estimate"},
      {"version", kVersion},
      {"seed", options.seed},
      {"input",
       {{"path", options.input_path},
        {"format", resolved_format},
        {"hash", content_hash(content)},
        {"n", samples.size()},
        {"d", samples.dims()}}},
      {"config", sampler_meta(options.draws, options.truncation,
                              options.burn_in_sweeps, options.between_sweeps)},
      {"levels", options.levels},
      {"standardize_f", options.standardize_f},
      {"failed_draws", posterior.failed_draws}};
  return report.dump(2) + "\n";
}

std::string baseline_report(const BaselineOptions& options) {
  std::string content;
  const SampleSet<double> samples =
      load_sample_set(options.input_path, options.format, &content);
  const Interval ci = mc_t_interval(samples.values, options.level);

  ordered_json report;
  report["mean"] = samples.values.mean();
  report["interval"] = {ci.lo, ci.hi};
  report["level"] = options.level;
  report["n"] = samples.size();
  report["meta"] = {{"command", "baseline"},
                    {"version", kVersion},
                    {"seed", nullptr},
                    {"input",
                     {{"path", options.input_path},
                      {"hash", content_hash(content)},
                      {"n", samples.size()},
                      {"d", samples.dims()}}}};
  return report.dump(2) + "\n";
}

std::vector<CoverageRow> coverage_experiment(const IntegrationTask& task,
                                             const std::vector<int>& ns, int trials,
                                             int baseline_trials, double level,
                                             std::uint64_t seed,
                                             const SamplerConfig& base_config) {
  if (ns.empty()) throw InvalidInput("coverage: need at least one n");
  check_positive(trials, "trials");
  check_positive(baseline_trials, "baseline trials");
  if (!(level > 0.0) || !(level < 1.0))
    throw InvalidInput("coverage: level must lie in (0, 1)");

  const double truth = true_integral(task);
  std::vector<CoverageRow> rows;

  for (std::size_t ni = 0; ni < ns.size(); ++ni) {
    const int n = ns[ni];
    check_positive(n, "n");
    std::vector<char> covered(static_cast<std::size_t>(trials), 0);
    parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
      auto data_rng = make_rng(seed, {kDataStream, ni, t});
      const SampleSet<double> samples = sample_task(task, n, data_rng);
      SamplerConfig config = base_config;
      config.seed = substream_seed(seed, {kSamplerStream, ni, t});
      const IntegralPosterior posterior =
          sample_integral_posterior(samples, HyperPriors{}, config);
      covered[t] =
          central_credible_interval(posterior.draws, level).contains(truth) ? 1 : 0;
    });
    const CoverageSummary summary =
        coverage_frequency(std::vector<bool>(covered.begin(), covered.end()));
    rows.push_back({"dpmbq", n, trials, summary.rate, summary.std_error});
  }

  for (std::size_t ni = 0; ni < ns.size(); ++ni) {
    const int n = ns[ni];
    if (n < 2) throw InvalidInput("coverage: the t-interval needs n >= 2");
    std::vector<char> covered(static_cast<std::size_t>(baseline_trials), 0);
    parallel_for(static_cast<std::size_t>(baseline_trials), [&](std::size_t t) {
      auto rng = make_rng(seed, {kBaselineStream, ni, t});
      const SampleSet<double> samples = sample_task(task, n, rng);
      covered[t] = mc_t_interval(samples.values, level).contains(truth) ? 1 : 0;
    });
    const CoverageSummary summary =
        coverage_frequency(std::vector<bool>(covered.begin(), covered.end()));
    rows.push_back({"t-interval", n, baseline_trials, summary.rate, summary.std_error});
  }
  return rows;
}

std::string coverage_report(const CoverageOptions& options) {
  std::string content;
  const IntegrationTask task = load_task(options.task_path, &content);

  SamplerConfig base_config;
  base_config.outer_draws = options.draws;
  base_config.truncation = options.truncation;
  base_config.burn_in_sweeps = options.burn_in_sweeps;
  base_config.between_sweeps = options.between_sweeps;

  const std::vector<CoverageRow> rows =
      coverage_experiment(task, options.ns, options.trials, options.baseline_trials,
                          options.level, options.seed, base_config);

  ordered_json meta = {
      {"command", "coverage"},
      {"version", kVersion},
      {"seed", options.seed},
      {"task", {{"path", options.task_path}, {"hash", content_hash(content)}}},
      {"n", options.ns},
      {"trials", options.trials},
      {"baseline_trials", options.baseline_trials},
      {"level", options.level},
      {"config", sampler_meta(options.draws, options.truncation,
                              options.burn_in_sweeps, options.between_sweeps)}};

  std::ostringstream out;
  out << meta_comment(meta);
  out << "method,n,trials,rate,se\n";
  for (const CoverageRow& row : rows)
    out << row.method << ',' << row.n << ',' << row.trials << ','
        << format_double(row.rate) << ',' << format_double(row.se) << '\n';
  return out.str();
}

std::vector<ConvergencePoint> convergence_experiment(
    const IntegrationTask& task, const std::vector<int>& n_grid, int reps,
    std::uint64_t seed, const SamplerConfig& base_config,
    const std::function<double(int, int)>& w_override) {
  if (n_grid.empty()) throw InvalidInput("convergence: need at least one n");
  for (std::size_t i = 0; i + 1 < n_grid.size(); ++i)
    if (n_grid[i] >= n_grid[i + 1])
      throw InvalidInput("convergence: n grid must be strictly ascending");
  check_positive(reps, "reps");
  check_positive(n_grid.front(), "n");

  const double truth = true_integral(task);
  const std::size_t total = n_grid.size() * static_cast<std::size_t>(reps);
  std::vector<ConvergencePoint> points(total);

  parallel_for(total, [&](std::size_t idx) {
    const std::size_t ni = idx / static_cast<std::size_t>(reps);
    const std::size_t rep = idx % static_cast<std::size_t>(reps);
    const int n = n_grid[ni];
    double w = 0.0;
    if (w_override) {
      w = w_override(n, static_cast<int>(rep));
    } else {
      auto data_rng = make_rng(seed, {kDataStream, ni, rep});
      const SampleSet<double> samples = sample_task(task, n, data_rng);
      SamplerConfig config = base_config;
      config.seed = substream_seed(seed, {kSamplerStream, ni, rep});
      const IntegralPosterior posterior =
          sample_integral_posterior(samples, HyperPriors{}, config);
      w = wasserstein_to_point(posterior.draws, truth);
    }
    points[idx] = {n, static_cast<int>(rep), w};
  });
  return points;
}

std::string convergence_report(const ConvergenceOptions& options,
                               const std::function<double(int, int)>& w_override) {
  std::string content;
  const IntegrationTask task = load_task(options.task_path, &content);

  SamplerConfig base_config;
  base_config.outer_draws = options.draws;
  base_config.truncation = options.truncation;
  base_config.burn_in_sweeps = options.burn_in_sweeps;
  base_config.between_sweeps = options.between_sweeps;

  const std::vector<ConvergencePoint> points = convergence_experiment(
      task, options.n_grid, options.reps, options.seed, base_config, w_override);

  Eigen::VectorXd ns(points.size());
  Eigen::VectorXd ws(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    ns(static_cast<Eigen::Index>(i)) = points[i].n;
    ws(static_cast<Eigen::Index>(i)) = points[i].wasserstein;
  }
  const LineFit fit = fit_loglog_slope(ns, ws);

  ordered_json meta = {
      {"command", "convergence"},
      {"version", kVersion},
      {"seed", options.seed},
      {"task", {{"path", options.task_path}, {"hash", content_hash(content)}}},
      {"n_grid", options.n_grid},
      {"reps", options.reps},
      {"config", sampler_meta(options.draws, options.truncation,
                              options.burn_in_sweeps, options.between_sweeps)},
      {"fit", {{"slope", fit.slope}, {"intercept", fit.intercept}}}};

  std::ostringstream out;
  out << meta_comment(meta);
  out << "n,rep,wasserstein\n";
  for (const ConvergencePoint& point : points)
    out << point.n << ',' << point.rep << ',' << format_double(point.wasserstein)
        << '\n';
  return out.str();
}

}  // namespace dpmbq::cli
