#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <sstream>
#include <vector>

#include "dpmbq/bq.hpp"
#include "dpmbq/conjugate_means.hpp"
#include "dpmbq/dp_mixture.hpp"
#include "dpmbq/errors.hpp"
#include "dpmbq/parallel.hpp"
#include "dpmbq/rng.hpp"

namespace dpmbq {

// One joint draw of all hyper-parameters: the kernel (amplitude fixed,
// per-dimension length-scales) plus the mixture model's concentration and
// base distribution.
struct HyperParams {
  GaussianKernel<double> kernel;
  double concentration{1.0};
  NigParams base{};
};

// Hyper-priors: length-scales are Gamma(shape, rate) per dimension, the
// concentration is Exponential(rate), the amplitude and base distribution
// are fixed.
struct HyperPriors {
  double lengthscale_shape{2.0};
  double lengthscale_rate{1.0};
  double concentration_rate{1.0};
  double amplitude{1.0};
  NigParams base{};
};

inline void validate(const HyperPriors& priors) {
  if (!(priors.lengthscale_shape > 0.0) || !(priors.lengthscale_rate > 0.0) ||
      !(priors.concentration_rate > 0.0) || !(priors.amplitude > 0.0))
    throw InvalidInput("hyper priors: all rates, shapes and the amplitude must be positive");
  validate(priors.base);
}

struct SamplerConfig {
  int outer_draws{500};
  int truncation{500};
  int burn_in_sweeps{100};
  int between_sweeps{1};
  std::uint64_t seed{0};
};

inline void validate(const SamplerConfig& config) {
  if (config.outer_draws < 1)
    throw InvalidInput("sampler config: outer_draws must be at least 1");
  if (config.truncation < 1)
    throw InvalidInput("sampler config: truncation must be at least 1");
  if (config.burn_in_sweeps < 1)
    throw InvalidInput("sampler config: burn_in_sweeps must be at least 1");
  if (config.between_sweeps < 1)
    throw InvalidInput("sampler config: between_sweeps must be at least 1");
}

// The final product: scalar draws from the posterior over the integral.
struct IntegralPosterior {
  Eigen::VectorXd draws;
  int failed_draws{0};
};

inline HyperParams sample_hyperparameters(const HyperPriors& priors,
                                          Eigen::Index dims, std::mt19937_64& rng) {
  validate(priors);
  if (dims < 1) throw InvalidInput("sample_hyperparameters: need at least one dimension");
  HyperParams hp;
  hp.kernel.amplitude = priors.amplitude;
  hp.kernel.lengthscales.resize(dims);
  for (Eigen::Index k = 0; k < dims; ++k)
    hp.kernel.lengthscales(k) =
        draw_gamma(rng, priors.lengthscale_shape, priors.lengthscale_rate);
  hp.concentration = draw_exponential(rng, priors.concentration_rate);
  hp.base = priors.base;
  return hp;
}

inline double sample_integral(const NormalPosterior<double>& posterior,
                              std::mt19937_64& rng) {
  return posterior.mean + std::sqrt(posterior.variance) * draw_normal(rng);
}

// Integral draw for a fixed mixture realisation: closed-form kernel mean and
// initial error, then one draw from the resulting normal posterior.
inline double integral_draw_given_realisation(const SampleSet<double>& samples,
                                              const GaussianKernel<double>& kernel,
                                              const MixtureRealisation& real,
                                              std::mt19937_64& rng) {
  const Eigen::VectorXd mean_vector =
      kernel_mean_vector(samples.locations, real, kernel);
  const double error = initial_error(real, kernel);
  return sample_integral(bq_posterior(samples, kernel, mean_vector, error), rng);
}

inline DpConfig dp_config_for(const HyperParams& hp, const SamplerConfig& config) {
  return {hp.concentration, hp.base, config.truncation, config.burn_in_sweeps};
}

// Advances an already burned-in chain by between_sweeps, stick-breaks one
// realisation, and returns one draw of the integral.
inline double draw_integral_once(const SampleSet<double>& samples,
                                 const HyperParams& hp, LatentState& state,
                                 const SamplerConfig& config, std::mt19937_64& rng) {
  validate(config);
  const DpConfig dp = dp_config_for(hp, config);
  for (int s = 0; s < config.between_sweeps; ++s)
    state = gibbs_sweep(std::move(state), samples, dp, rng);
  const MixtureRealisation real = stick_breaking_draw(state, dp, rng);
  return integral_draw_given_realisation(samples, hp.kernel, real, rng);
}

// The outer sampler. Every draw runs on its own substream derived from
// (seed, draw index): fresh hyper-parameters, a fresh chain initialised at
// the data, burn-in, then one integral draw. Draws are therefore identical
// regardless of how they are scheduled across threads. Draws that fail
// numerically are dropped; more than 1% failures fails the run.
inline IntegralPosterior sample_integral_posterior(const SampleSet<double>& samples,
                                                   const HyperPriors& priors,
                                                   const SamplerConfig& config) {
  validate(samples);
  validate(priors);
  validate(config);

  const std::size_t count = static_cast<std::size_t>(config.outer_draws);
  Eigen::VectorXd draws(config.outer_draws);
  std::vector<char> succeeded(count, 0);

  parallel_for(count, [&](std::size_t k) {
    std::mt19937_64 rng = make_rng(config.seed, {static_cast<std::uint64_t>(k)});
    try {
      const HyperParams hp = sample_hyperparameters(priors, samples.dims(), rng);
      LatentState state = initial_latent_state(samples);
      const DpConfig dp = dp_config_for(hp, config);
      for (int s = 0; s < config.burn_in_sweeps; ++s)
        state = gibbs_sweep(std::move(state), samples, dp, rng);
      const double value = draw_integral_once(samples, hp, state, config, rng);
      if (!std::isfinite(value)) throw NumericalFailure("non-finite integral draw");
      draws(static_cast<Eigen::Index>(k)) = value;
      succeeded[k] = 1;
    } catch (const NumericalFailure&) {
      succeeded[k] = 0;
    }
  });

  IntegralPosterior out;
  Eigen::Index kept = 0;
  for (std::size_t k = 0; k < count; ++k)
    if (succeeded[k]) draws(kept++) = draws(static_cast<Eigen::Index>(k));
  out.draws = draws.head(kept);
  out.failed_draws = config.outer_draws - static_cast<int>(kept);

  if (out.failed_draws > 0.01 * config.outer_draws) {
    std::ostringstream msg;
    msg << "sample_integral_posterior: " << out.failed_draws << " of "
        << config.outer_draws << " draws failed numerically";
    throw NumericalFailure(msg.str());
  }
  return out;
}

}  // namespace dpmbq
