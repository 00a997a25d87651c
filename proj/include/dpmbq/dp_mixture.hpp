#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "dpmbq/errors.hpp"
#include "dpmbq/nig.hpp"
#include "dpmbq/rng.hpp"
#include "dpmbq/samples.hpp"

namespace dpmbq {

struct DpConfig {
  double concentration{1.0};  // alpha
  NigParams base{};           // shared across dimensions
  int truncation{500};        // stick-breaking terms kept
  int gibbs_sweeps{100};      // default burn-in budget
};

inline void validate(const DpConfig& config) {
  if (!(config.concentration > 0.0))
    throw InvalidInput("dp config: concentration must be positive");
  validate(config.base);
  if (config.truncation < 1)
    throw InvalidInput("dp config: truncation must be at least 1");
  if (config.gibbs_sweeps < 1)
    throw InvalidInput("dp config: gibbs_sweeps must be at least 1");
}

// Per-point latent component parameters: one (mean, variance) pair per data
// point and dimension, stored as two n x d matrices.
struct LatentState {
  Eigen::MatrixXd means;
  Eigen::MatrixXd variances;

  Eigen::Index size() const { return means.rows(); }
  Eigen::Index dims() const { return means.cols(); }
};

inline void validate(const LatentState& state) {
  if (state.means.rows() != state.variances.rows() ||
      state.means.cols() != state.variances.cols())
    throw InvalidInput("latent state: means and variances must have equal shape");
  if (state.size() < 1)
    throw InvalidInput("latent state: need at least one row");
  if (!(state.variances.array() > 0.0).all())
    throw InvalidInput("latent state: variances must be positive");
}

// Chain initialisation: latent means start at the data, variances at one.
inline LatentState initial_latent_state(const SampleSet<double>& samples) {
  validate(samples);
  return {samples.locations,
          Eigen::MatrixXd::Ones(samples.size(), samples.dims())};
}

// One truncated stick-breaking realisation of the mixing distribution:
// weights w_1..w_N (summing to one exactly, see stick_breaking_draw) and a
// diagonal-Gaussian component per weight.
struct MixtureRealisation {
  Eigen::VectorXd weights;    // N
  Eigen::MatrixXd means;      // N x d
  Eigen::MatrixXd variances;  // N x d

  Eigen::Index components() const { return weights.size(); }
  Eigen::Index dims() const { return means.cols(); }
};

inline void validate(const MixtureRealisation& real) {
  if (real.components() < 1)
    throw InvalidInput("mixture realisation: need at least one component");
  if (real.means.rows() != real.components() ||
      real.variances.rows() != real.components() ||
      real.means.cols() != real.variances.cols())
    throw InvalidInput("mixture realisation: inconsistent component shapes");
  if (!(real.weights.array() >= 0.0).all())
    throw InvalidInput("mixture realisation: weights must be nonnegative");
  if (std::abs(real.weights.sum() - 1.0) > 1e-12)
    throw InvalidInput("mixture realisation: weights must sum to one");
  // Zero variances are admitted for point-mass fixtures.
  if (!(real.variances.array() >= 0.0).all())
    throw InvalidInput("mixture realisation: variances must be nonnegative");
}

namespace detail {

// Log weights of the conditional for point i: the fresh-draw branch gets
// log(alpha) plus the NIG predictive log density of x_i; copying atom j gets
// the Gaussian log density of x_i under phi_j. row_log_var_sum caches
// sum_k log variances(j, k) so a sweep only recomputes the row it changed.
inline void conditional_log_weights(Eigen::Index i, const LatentState& state,
                                    const SampleSet<double>& samples,
                                    const DpConfig& config,
                                    const Eigen::VectorXd& row_log_var_sum,
                                    double& log_base, Eigen::VectorXd& log_copy) {
  const Eigen::Index d = state.dims();
  const auto x = samples.locations.row(i);
  const double norm = static_cast<double>(d) * std::log(2.0 * std::numbers::pi);

  const Eigen::ArrayXd quad = ((state.means.rowwise() - x).array().square() /
                               state.variances.array())
                                  .rowwise()
                                  .sum();
  log_copy = (-0.5 * (quad + row_log_var_sum.array() + norm)).matrix();
  log_copy(i) = -std::numeric_limits<double>::infinity();

  log_base = std::log(config.concentration);
  for (Eigen::Index k = 0; k < d; ++k)
    log_base += log_nig_marginal(x(k), config.base);
}

}  // namespace detail

// Normalized conditional distribution for latent point i given all others:
// probability base_weight of drawing a fresh atom from the one-observation
// NIG posterior, else copy atom j with probability copy_weights(j).
// copy_weights(i) is always zero.
struct GibbsConditional {
  double base_weight{1.0};
  Eigen::VectorXd copy_weights;
};

inline GibbsConditional gibbs_conditional(Eigen::Index i, const LatentState& state,
                                          const SampleSet<double>& samples,
                                          const DpConfig& config) {
  validate(state);
  validate(samples);
  validate(config);
  if (state.size() != samples.size() || state.dims() != samples.dims())
    throw InvalidInput("gibbs_conditional: state and samples disagree in shape");
  if (i < 0 || i >= state.size())
    throw InvalidInput("gibbs_conditional: index out of range");

  const Eigen::VectorXd row_log_var_sum =
      state.variances.array().log().rowwise().sum();
  double log_base = 0.0;
  Eigen::VectorXd log_copy;
  detail::conditional_log_weights(i, state, samples, config, row_log_var_sum,
                                  log_base, log_copy);

  const double shift = std::max(log_base, log_copy.maxCoeff());
  GibbsConditional out;
  out.base_weight = std::exp(log_base - shift);
  out.copy_weights = (log_copy.array() - shift).exp();
  double total = out.base_weight;
  for (Eigen::Index j = 0; j < out.copy_weights.size(); ++j)
    total += out.copy_weights(j);
  out.base_weight /= total;
  out.copy_weights /= total;
  return out;
}

// One systematic-scan sweep: resamples phi_i for i = 1..n in order.
// Deterministic given the engine state.
inline LatentState gibbs_sweep(LatentState state, const SampleSet<double>& samples,
                               const DpConfig& config, std::mt19937_64& rng) {
  validate(state);
  validate(samples);
  validate(config);
  if (state.size() != samples.size() || state.dims() != samples.dims())
    throw InvalidInput("gibbs_sweep: state and samples disagree in shape");

  const Eigen::Index n = state.size();
  const Eigen::Index d = state.dims();
  Eigen::VectorXd row_log_var_sum = state.variances.array().log().rowwise().sum();
  Eigen::VectorXd log_copy;

  for (Eigen::Index i = 0; i < n; ++i) {
    double log_base = 0.0;
    detail::conditional_log_weights(i, state, samples, config, row_log_var_sum,
                                    log_base, log_copy);
    const double shift = std::max(log_base, log_copy.maxCoeff());
    const double base = std::exp(log_base - shift);
    const Eigen::ArrayXd copy = (log_copy.array() - shift).exp();

    // Sequential total so the cumulative walk below always terminates.
    double total = base;
    for (Eigen::Index j = 0; j < n; ++j) total += copy(j);

    const double u = draw_uniform(rng) * total;
    if (u < base || n == 1) {
      for (Eigen::Index k = 0; k < d; ++k) {
        const NigParams post =
            nig_posterior_update(samples.locations(i, k), config.base);
        const auto [mean, variance] = sample_nig(post, rng);
        state.means(i, k) = mean;
        state.variances(i, k) = variance;
      }
    } else {
      double acc = base;
      Eigen::Index j = 0;
      for (; j + 1 < n; ++j) {
        acc += copy(j);
        if (u < acc) break;
      }
      state.means.row(i) = state.means.row(j);
      state.variances.row(i) = state.variances.row(j);
    }
    row_log_var_sum(i) = state.variances.row(i).array().log().sum();
  }
  return state;
}

// Stick-breaking weights from the given break fractions:
//   w_j = betas_j * prod_{j' < j} (1 - betas_{j'})
inline Eigen::VectorXd stick_weights(const Eigen::Ref<const Eigen::VectorXd>& betas) {
  if (betas.size() < 1) throw InvalidInput("stick_weights: need at least one break");
  Eigen::VectorXd weights(betas.size());
  double rest = 1.0;
  for (Eigen::Index j = 0; j < betas.size(); ++j) {
    weights(j) = betas(j) * rest;
    rest *= 1.0 - betas(j);
  }
  return weights;
}

// Draws one truncated realisation of the conditional mixing distribution.
// Break fractions are Beta(1, alpha + n); the final break is pinned to one
// so the truncated weights form a proper distribution. Each atom is a fresh
// base draw with probability alpha / (alpha + n), else a uniform copy of one
// of the latent rows.
inline MixtureRealisation stick_breaking_draw(const LatentState& state,
                                              const DpConfig& config,
                                              std::mt19937_64& rng) {
  validate(state);
  validate(config);

  const Eigen::Index n = state.size();
  const Eigen::Index d = state.dims();
  const Eigen::Index trunc = config.truncation;
  const double mass = config.concentration + static_cast<double>(n);

  Eigen::VectorXd betas(trunc);
  for (Eigen::Index j = 0; j + 1 < trunc; ++j) betas(j) = draw_beta_one(rng, mass);
  betas(trunc - 1) = 1.0;

  MixtureRealisation real;
  real.weights = stick_weights(betas);
  real.means.resize(trunc, d);
  real.variances.resize(trunc, d);

  const double p_fresh = config.concentration / mass;
  for (Eigen::Index j = 0; j < trunc; ++j) {
    if (draw_uniform(rng) < p_fresh) {
      for (Eigen::Index k = 0; k < d; ++k) {
        const auto [mean, variance] = sample_nig(config.base, rng);
        real.means(j, k) = mean;
        real.variances(j, k) = variance;
      }
    } else {
      const Eigen::Index i =
          static_cast<Eigen::Index>(draw_index(rng, static_cast<std::uint64_t>(n)));
      real.means.row(j) = state.means.row(i);
      real.variances.row(j) = state.variances.row(i);
    }
  }
  return real;
}

}  // namespace dpmbq
