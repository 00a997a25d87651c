#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "dpmbq/errors.hpp"
#include "dpmbq/interval.hpp"

namespace dpmbq {

// Mean absolute deviation of the empirical posterior from a point: the
// 1-Wasserstein distance between the draws and a point mass at `truth`.
inline double wasserstein_to_point(const Eigen::Ref<const Eigen::VectorXd>& draws,
                                   double truth) {
  if (draws.size() < 1) throw InvalidInput("wasserstein_to_point: no draws");
  return (draws.array() - truth).abs().mean();
}

namespace detail {

// Quantile by linear interpolation between order statistics at rank
// h = (n - 1) p + 1 (1-indexed).
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  const double h = static_cast<double>(n - 1) * p;
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace detail

// Central credible interval: empirical quantiles at (1 - level)/2 and
// (1 + level)/2.
inline Interval central_credible_interval(const Eigen::Ref<const Eigen::VectorXd>& draws,
                                          double level) {
  if (draws.size() < 1) throw InvalidInput("central_credible_interval: no draws");
  if (!(level > 0.0) || !(level < 1.0))
    throw InvalidInput("central_credible_interval: level must lie in (0, 1)");
  std::vector<double> sorted(draws.data(), draws.data() + draws.size());
  std::sort(sorted.begin(), sorted.end());
  return {detail::quantile_sorted(sorted, 0.5 * (1.0 - level)),
          detail::quantile_sorted(sorted, 0.5 * (1.0 + level))};
}

struct CoverageSummary {
  double rate{0.0};
  double std_error{0.0};
};

inline CoverageSummary coverage_frequency(const std::vector<bool>& covered) {
  if (covered.empty()) throw InvalidInput("coverage_frequency: no trials");
  const double trials = static_cast<double>(covered.size());
  double hits = 0.0;
  for (bool c : covered) hits += c ? 1.0 : 0.0;
  const double rate = hits / trials;
  return {rate, std::sqrt(rate * (1.0 - rate) / trials)};
}

struct LineFit {
  double slope{0.0};
  double intercept{0.0};
};

// Ordinary least squares of log(w) on log(n).
inline LineFit fit_loglog_slope(const Eigen::Ref<const Eigen::VectorXd>& ns,
                                const Eigen::Ref<const Eigen::VectorXd>& ws) {
  if (ns.size() != ws.size() || ns.size() < 2)
    throw InvalidInput("fit_loglog_slope: need two or more paired points");
  if (!(ns.array() > 0.0).all() || !(ws.array() > 0.0).all())
    throw InvalidInput("fit_loglog_slope: inputs must be positive");

  const Eigen::ArrayXd lx = ns.array().log();
  const Eigen::ArrayXd ly = ws.array().log();
  const double mx = lx.mean();
  const double my = ly.mean();
  const double sxx = (lx - mx).square().sum();
  if (!(sxx > 0.0))
    throw InvalidInput("fit_loglog_slope: need at least two distinct n");
  const double sxy = ((lx - mx) * (ly - my)).sum();
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

}  // namespace dpmbq
