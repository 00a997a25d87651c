#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dpmbq/nig.hpp"
#include "dpmbq/rng.hpp"
#include "support/oracles.hpp"

using namespace dpmbq;

namespace {

double inv_gamma_pdf(double v, double shape, double rate) {
  return std::exp(shape * std::log(rate) - std::lgamma(shape) -
                  (shape + 1.0) * std::log(v) - rate / v);
}

double nig_pdf(double m, double v, const NigParams& p) {
  return test::normal_pdf(m, p.location, v / p.precision_scale) *
         inv_gamma_pdf(v, p.shape, p.rate);
}

// Numeric one-observation marginal: double integral of N(x|m,v) times the
// NIG prior density, with the variance integrated on the precision scale
// g = 1/v.
double marginal_oracle(double x, const NigParams& prior) {
  auto outer = [&](double g) {
    const double v = 1.0 / g;
    const double spread = 15.0 * std::sqrt(v * (1.0 + 1.0 / prior.precision_scale));
    const double lo = std::min(x, prior.location) - spread;
    const double hi = std::max(x, prior.location) + spread;
    const double inner = test::adaptive_simpson(
        [&](double m) { return test::normal_pdf(x, m, v) * nig_pdf(m, v, prior); },
        lo, hi, 1e-12);
    return inner / (g * g);
  };
  const double cap = 60.0 / prior.rate + 40.0;
  return test::adaptive_simpson(outer, 1e-9, cap, 1e-11);
}

}  // namespace

TEST_CASE("nig update: symmetric observation only bumps counts") {
  const NigParams post = nig_posterior_update(0.0, NigParams{0.0, 1.0, 1.0, 1.0});
  CHECK(post.location == 0.0);
  CHECK(post.precision_scale == 2.0);
  CHECK(post.shape == 1.5);
  CHECK(post.rate == 1.0);
}

TEST_CASE("nig update: informative observation") {
  const NigParams post = nig_posterior_update(2.0, NigParams{0.0, 1.0, 1.0, 1.0});
  CHECK(post.location == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(post.precision_scale == 2.0);
  CHECK(post.shape == 1.5);
  CHECK(post.rate == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("nig update: the prior location is a fixed point") {
  auto rng = make_rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    NigParams prior{draw_normal(rng, 0.0, 3.0), 0.1 + draw_uniform(rng),
                    0.5 + draw_uniform(rng), 0.5 + draw_uniform(rng)};
    const NigParams post = nig_posterior_update(prior.location, prior);
    CHECK(post.location == doctest::Approx(prior.location).epsilon(1e-15));
    CHECK(post.rate == doctest::Approx(prior.rate).epsilon(1e-15));
  }
}

TEST_CASE("nig update: order of observations does not matter") {
  auto rng = make_rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    NigParams prior{draw_normal(rng), 0.2 + draw_uniform(rng),
                    0.5 + 2.0 * draw_uniform(rng), 0.5 + 2.0 * draw_uniform(rng)};
    const double a = draw_normal(rng, 0.0, 2.0);
    const double b = draw_normal(rng, 0.0, 2.0);
    const NigParams ab = nig_posterior_update(b, nig_posterior_update(a, prior));
    const NigParams ba = nig_posterior_update(a, nig_posterior_update(b, prior));
    CHECK(ab.location == doctest::Approx(ba.location).epsilon(1e-12));
    CHECK(ab.precision_scale == ba.precision_scale);
    CHECK(ab.shape == ba.shape);
    CHECK(std::fabs(ab.rate - ba.rate) <= 1e-12);
  }
}

TEST_CASE("nig update: posterior rate stays positive") {
  auto rng = make_rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    NigParams prior{draw_normal(rng, 0.0, 10.0), 0.01 + 5.0 * draw_uniform(rng),
                    0.1 + 3.0 * draw_uniform(rng), 0.1 + 3.0 * draw_uniform(rng)};
    const NigParams post = nig_posterior_update(draw_normal(rng, 0.0, 50.0), prior);
    CHECK(post.rate > 0.0);
  }
}

TEST_CASE("nig update: matches the numeric conjugate-Bayes oracle") {
  // Posterior density must equal likelihood * prior / marginal pointwise.
  const NigParams prior{0.0, 1.0, 1.0, 1.0};
  const double x = 2.0;
  const NigParams post = nig_posterior_update(x, prior);
  const double evidence = marginal_oracle(x, prior);
  for (double m : {0.5, 1.0, 1.8}) {
    for (double v : {0.4, 1.0, 2.5}) {
      const double numeric = test::normal_pdf(x, m, v) * nig_pdf(m, v, prior) / evidence;
      CHECK(nig_pdf(m, v, post) == doctest::Approx(numeric).epsilon(1e-6));
    }
  }
}

TEST_CASE("nig marginal: agrees with the numeric double integral on a grid") {
  const NigParams prior{0.0, 1.0, 1.0, 1.0};
  for (int xi = -3; xi <= 3; ++xi) {
    const double x = static_cast<double>(xi);
    const double closed = std::exp(log_nig_marginal(x, prior));
    const double numeric = marginal_oracle(x, prior);
    CHECK(closed == doctest::Approx(numeric).epsilon(1e-6));
  }
}

TEST_CASE("base marginal weight: defaults at the origin give one quarter") {
  const double w =
      base_marginal_weight(Eigen::VectorXd::Zero(1), NigParams{0.0, 1.0, 1.0, 1.0}, 1.0);
  CHECK(w == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("base marginal weight: exactly linear in the concentration") {
  auto rng = make_rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd x(2);
    x << draw_normal(rng), draw_normal(rng);
    const double alpha = 0.1 + 2.0 * draw_uniform(rng);
    const double once = base_marginal_weight(x, NigParams{}, alpha);
    const double twice = base_marginal_weight(x, NigParams{}, 2.0 * alpha);
    CHECK(twice == 2.0 * once);
  }
}

TEST_CASE("base marginal weight: decays monotonically away from the location") {
  double prev = base_marginal_weight(Eigen::VectorXd::Zero(1), NigParams{}, 1.0);
  for (double x = 0.5; x <= 8.0; x += 0.5) {
    const double up = base_marginal_weight(Eigen::VectorXd::Constant(1, x), NigParams{}, 1.0);
    const double down =
        base_marginal_weight(Eigen::VectorXd::Constant(1, -x), NigParams{}, 1.0);
    CHECK(up < prev);
    CHECK(up == doctest::Approx(down).epsilon(1e-12));
    prev = up;
  }
}

TEST_CASE("sample_nig: inverse-gamma variance mean") {
  auto rng = make_rng(23);
  const NigParams params{0.0, 1.0, 3.0, 2.0};
  const int count = 100000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < count; ++i) {
    const auto [mean, variance] = sample_nig(params, rng);
    CHECK(variance > 0.0);
    sum += variance;
    sum_sq += variance * variance;
    (void)mean;
  }
  const double avg = sum / count;
  const double sd = std::sqrt((sum_sq / count - avg * avg) / count);
  // E[v] = rate / (shape - 1) = 1.
  CHECK(std::fabs(avg - 1.0) <= 3.0 * sd);
}

TEST_CASE("sample_nig: location draws centre at the prior location") {
  auto rng = make_rng(29);
  const NigParams params{1.5, 2.0, 3.0, 2.0};
  const int count = 100000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < count; ++i) {
    const auto [mean, variance] = sample_nig(params, rng);
    sum += mean;
    sum_sq += mean * mean;
    (void)variance;
  }
  const double avg = sum / count;
  const double sd = std::sqrt((sum_sq / count - avg * avg) / count);
  CHECK(std::fabs(avg - 1.5) <= 3.0 * sd);
}

TEST_CASE("nig validation rejects nonpositive parameters") {
  CHECK_THROWS_AS(validate(NigParams{0.0, 0.0, 1.0, 1.0}), InvalidInput);
  CHECK_THROWS_AS(validate(NigParams{0.0, 1.0, -1.0, 1.0}), InvalidInput);
  CHECK_THROWS_AS(validate(NigParams{0.0, 1.0, 1.0, 0.0}), InvalidInput);
  CHECK_THROWS_AS(
      (void)base_marginal_weight(Eigen::VectorXd::Zero(1), NigParams{}, 0.0),
      InvalidInput);
}
