#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <set>

#include "dpmbq/errors.hpp"
#include "dpmbq/interval.hpp"
#include "dpmbq/rng.hpp"
#include "dpmbq/samples.hpp"
#include "dpmbq/student_t.hpp"

namespace dpmbq {

// One-dimensional Gaussian mixture sum_i weights_i N(means_i, sds_i^2).
struct GaussianMixtureSpec {
  Eigen::VectorXd weights;
  Eigen::VectorXd means;
  Eigen::VectorXd sds;

  Eigen::Index components() const { return weights.size(); }
};

inline void validate(const GaussianMixtureSpec& mix) {
  if (mix.components() < 1)
    throw InvalidInput("mixture spec: need at least one component");
  if (mix.means.size() != mix.components() || mix.sds.size() != mix.components())
    throw InvalidInput("mixture spec: weights, means and sds must have equal length");
  if (!(mix.weights.array() >= 0.0).all())
    throw InvalidInput("mixture spec: weights must be nonnegative");
  if (std::abs(mix.weights.sum() - 1.0) > 1e-12)
    throw InvalidInput("mixture spec: weights must sum to one");
  if (!(mix.sds.array() >= 0.0).all())
    throw InvalidInput("mixture spec: standard deviations must be nonnegative");
}

// Sparse polynomial sum_t coefficients_t x^exponents_t with distinct
// nonnegative exponents.
struct PolynomialSpec {
  Eigen::VectorXd coefficients;
  Eigen::VectorXi exponents;

  Eigen::Index terms() const { return coefficients.size(); }
};

inline void validate(const PolynomialSpec& poly) {
  if (poly.terms() < 1)
    throw InvalidInput("polynomial spec: need at least one term");
  if (poly.exponents.size() != poly.terms())
    throw InvalidInput("polynomial spec: coefficients and exponents must have equal length");
  if (!(poly.exponents.array() >= 0).all())
    throw InvalidInput("polynomial spec: exponents must be nonnegative");
  std::set<int> seen;
  for (Eigen::Index t = 0; t < poly.terms(); ++t)
    if (!seen.insert(poly.exponents(t)).second)
      throw InvalidInput("polynomial spec: exponents must be distinct");
}

struct IntegrationTask {
  GaussianMixtureSpec mixture;
  PolynomialSpec polynomial;
};

// E[x^order] for N(mean, sd^2) via the recurrence
//   M_b = mean M_{b-1} + (b - 1) sd^2 M_{b-2},  M_0 = 1, M_1 = mean.
inline double gaussian_raw_moment(int order, double mean, double sd) {
  if (order < 0 || order > 64)
    throw InvalidInput("gaussian_raw_moment: order must lie in [0, 64]");
  if (!(sd >= 0.0))
    throw InvalidInput("gaussian_raw_moment: sd must be nonnegative");
  if (order == 0) return 1.0;
  double prev = 1.0;
  double cur = mean;
  for (int b = 2; b <= order; ++b) {
    const double next = mean * cur + (b - 1) * sd * sd * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

inline double true_integral(const PolynomialSpec& poly, const GaussianMixtureSpec& mix) {
  validate(poly);
  validate(mix);
  double total = 0.0;
  for (Eigen::Index i = 0; i < mix.components(); ++i) {
    double component = 0.0;
    for (Eigen::Index t = 0; t < poly.terms(); ++t)
      component += poly.coefficients(t) *
                   gaussian_raw_moment(poly.exponents(t), mix.means(i), mix.sds(i));
    total += mix.weights(i) * component;
  }
  return total;
}

inline double true_integral(const IntegrationTask& task) {
  return true_integral(task.polynomial, task.mixture);
}

inline Eigen::VectorXd sample_mixture(const GaussianMixtureSpec& mix,
                                      Eigen::Index count, std::mt19937_64& rng) {
  validate(mix);
  if (count < 1) throw InvalidInput("sample_mixture: need a positive sample count");
  const double total = mix.weights.sum();
  Eigen::VectorXd out(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    const double u = draw_uniform(rng) * total;
    double acc = 0.0;
    Eigen::Index c = 0;
    for (; c + 1 < mix.components(); ++c) {
      acc += mix.weights(c);
      if (u < acc) break;
    }
    out(i) = draw_normal(rng, mix.means(c), mix.sds(c));
  }
  return out;
}

// Dense Horner evaluation; exact for integer inputs within floating range.
inline Eigen::VectorXd eval_polynomial(const PolynomialSpec& poly,
                                       const Eigen::Ref<const Eigen::VectorXd>& xs) {
  validate(poly);
  const int degree = poly.exponents.maxCoeff();
  Eigen::VectorXd dense = Eigen::VectorXd::Zero(degree + 1);
  for (Eigen::Index t = 0; t < poly.terms(); ++t)
    dense(poly.exponents(t)) += poly.coefficients(t);

  Eigen::VectorXd out(xs.size());
  for (Eigen::Index i = 0; i < xs.size(); ++i) {
    double acc = dense(degree);
    for (int b = degree - 1; b >= 0; --b) acc = acc * xs(i) + dense(b);
    out(i) = acc;
  }
  return out;
}

// Student-t confidence interval for the mean:
//   mean(values) +/- t_{(1+level)/2, n-1} * s / sqrt(n)
// with s the unbiased sample standard deviation. Degenerate (zero-width)
// when all values coincide.
inline Interval mc_t_interval(const Eigen::Ref<const Eigen::VectorXd>& values,
                              double level) {
  const Eigen::Index n = values.size();
  if (n < 2) throw InvalidInput("mc_t_interval: need at least two values");
  if (!(level > 0.0) || !(level < 1.0))
    throw InvalidInput("mc_t_interval: level must lie in (0, 1)");
  const double mean = values.mean();
  const double sd =
      std::sqrt((values.array() - mean).square().sum() / static_cast<double>(n - 1));
  const double half_width = student_t_quantile(0.5 * (1.0 + level),
                                               static_cast<double>(n - 1)) *
                            sd / std::sqrt(static_cast<double>(n));
  return {mean - half_width, mean + half_width};
}

inline SampleSet<double> sample_task(const IntegrationTask& task, Eigen::Index count,
                                     std::mt19937_64& rng) {
  Eigen::VectorXd xs = sample_mixture(task.mixture, count, rng);
  Eigen::VectorXd fs = eval_polynomial(task.polynomial, xs);
  return univariate_sample_set(std::move(xs), std::move(fs));
}

// f(x) = 1 + x - 0.1 x^3 against the standard normal; the integral is
// exactly one.
inline IntegrationTask smooth_cubic_task() {
  IntegrationTask task;
  task.mixture.weights = Eigen::VectorXd::Ones(1);
  task.mixture.means = Eigen::VectorXd::Zero(1);
  task.mixture.sds = Eigen::VectorXd::Ones(1);
  task.polynomial.coefficients = Eigen::Vector3d(1.0, 1.0, -0.1);
  task.polynomial.exponents = Eigen::Vector3i(0, 1, 3);
  return task;
}

// Rare-event target: a tight component at the origin carrying 97% of the
// mass and a 3% component at x = 2. Small samples usually miss the minor
// mode entirely, which collapses naive error bars around the wrong value.
inline IntegrationTask rare_event_task() {
  IntegrationTask task;
  task.mixture.weights = Eigen::Vector2d(0.97, 0.03);
  task.mixture.means = Eigen::Vector2d(0.0, 2.0);
  task.mixture.sds = Eigen::Vector2d(0.1, 0.05);
  task.polynomial = smooth_cubic_task().polynomial;
  return task;
}

// Random task generators: Dirichlet(2) weights, standard normal means and
// coefficients, Exp(1) standard deviations.
inline GaussianMixtureSpec random_mixture(int components, std::mt19937_64& rng) {
  if (components < 1) throw InvalidInput("random_mixture: need at least one component");
  GaussianMixtureSpec mix;
  mix.weights.resize(components);
  mix.means.resize(components);
  mix.sds.resize(components);
  for (int i = 0; i < components; ++i) {
    mix.weights(i) = draw_gamma(rng, 2.0, 1.0);
    mix.means(i) = draw_normal(rng);
    mix.sds(i) = draw_exponential(rng, 1.0);
  }
  mix.weights /= mix.weights.sum();
  return mix;
}

inline PolynomialSpec random_polynomial(int degree, std::mt19937_64& rng) {
  if (degree < 0) throw InvalidInput("random_polynomial: degree must be nonnegative");
  PolynomialSpec poly;
  poly.coefficients.resize(degree + 1);
  poly.exponents.resize(degree + 1);
  for (int b = 0; b <= degree; ++b) {
    poly.coefficients(b) = draw_normal(rng);
    poly.exponents(b) = b;
  }
  return poly;
}

}  // namespace dpmbq
