#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>
#include <utility>

#include "dpmbq/errors.hpp"
#include "dpmbq/rng.hpp"

namespace dpmbq {

// Normal inverse-gamma prior over a Gaussian's (mean, variance) pair:
//   variance ~ InvGamma(shape, rate)
//   mean | variance ~ N(location, variance / precision_scale)
struct NigParams {
  double location{0.0};         // mu0
  double precision_scale{1.0};  // lambda0
  double shape{1.0};            // alpha0
  double rate{1.0};             // beta0
};

inline void validate(const NigParams& params) {
  if (!(params.precision_scale > 0.0) || !(params.shape > 0.0) ||
      !(params.rate > 0.0))
    throw InvalidInput("NIG: precision scale, shape and rate must be positive");
}

// Conjugate update for a single scalar observation:
//   lambda1 = lambda0 + 1
//   mu1     = (lambda0 mu0 + x) / lambda1
//   alpha1  = alpha0 + 1/2
//   beta1   = beta0 + lambda0 (x - mu0)^2 / (2 lambda1)
// The rate update is the cancellation-free form of
// beta0 + (lambda0 mu0^2 + x^2 - lambda1 mu1^2) / 2.
inline NigParams nig_posterior_update(double x, const NigParams& prior) {
  validate(prior);
  NigParams post;
  post.precision_scale = prior.precision_scale + 1.0;
  post.location = (prior.precision_scale * prior.location + x) / post.precision_scale;
  post.shape = prior.shape + 0.5;
  const double dx = x - prior.location;
  post.rate = prior.rate + 0.5 * prior.precision_scale * dx * dx / post.precision_scale;
  if (!(post.rate > 0.0))
    throw NumericalFailure("nig_posterior_update: nonpositive posterior rate");
  return post;
}

// Log marginal likelihood of one observation under the NIG prior (the
// Student-t predictive density at x):
//   (2 pi)^{-1/2} (l0/l1)^{1/2} (b0^{a0} / b1^{a1}) Gamma(a1)/Gamma(a0)
inline double log_nig_marginal(double x, const NigParams& prior) {
  const NigParams post = nig_posterior_update(x, prior);
  return -0.5 * std::log(2.0 * std::numbers::pi) +
         0.5 * (std::log(prior.precision_scale) - std::log(post.precision_scale)) +
         prior.shape * std::log(prior.rate) - post.shape * std::log(post.rate) +
         std::lgamma(post.shape) - std::lgamma(prior.shape);
}

// Unnormalized weight of the fresh-draw branch in the per-point Gibbs
// conditional: concentration times the NIG predictive density of the point,
// one independent factor per dimension. Computed in log space.
inline double base_marginal_weight(const Eigen::Ref<const Eigen::VectorXd>& x,
                                   const NigParams& base, double concentration) {
  if (!(concentration > 0.0))
    throw InvalidInput("base_marginal_weight: concentration must be positive");
  if (x.size() < 1)
    throw InvalidInput("base_marginal_weight: need at least one dimension");
  double logw = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) logw += log_nig_marginal(x(k), base);
  return concentration * std::exp(logw);
}

// One (mean, variance) draw.
inline std::pair<double, double> sample_nig(const NigParams& params,
                                            std::mt19937_64& rng) {
  validate(params);
  const double variance = 1.0 / draw_gamma(rng, params.shape, params.rate);
  if (!(variance > 0.0) || !std::isfinite(variance))
    throw NumericalFailure("sample_nig: degenerate variance draw");
  const double mean =
      draw_normal(rng, params.location, std::sqrt(variance / params.precision_scale));
  return {mean, variance};
}

}  // namespace dpmbq
