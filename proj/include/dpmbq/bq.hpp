#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <sstream>

#include "dpmbq/errors.hpp"
#include "dpmbq/kernel.hpp"
#include "dpmbq/samples.hpp"

namespace dpmbq {

template <typename Scalar = double>
struct NormalPosterior {
  Scalar mean{0};
  Scalar variance{0};
};

// Jitter ladder for the Gram factorization, relative to the diagonal scale
// (the kernel amplitude for matrices built by gram_matrix). Monte Carlo
// sample sets routinely contain near-duplicate rows, which make the plain
// Gram matrix numerically singular.
inline constexpr double kJitterStart = 1e-10;
inline constexpr double kJitterGrowth = 10.0;
inline constexpr double kJitterMax = 1e-4;

// Relative slack allowed before a negative posterior variance is treated as
// a failure rather than round-off.
inline constexpr double kVarianceSlack = 1e-8;

// Solves (gram + jitter*I) s = rhs with a Cholesky factorization, escalating
// the jitter through the ladder above. `gram` must be symmetric.
template <typename DerivedM, typename DerivedV>
Eigen::VectorX<typename DerivedM::Scalar> regularized_solve(
    const Eigen::MatrixBase<DerivedM>& gram,
    const Eigen::MatrixBase<DerivedV>& rhs) {
  using Scalar = typename DerivedM::Scalar;
  if (gram.rows() != gram.cols())
    throw InvalidInput("regularized_solve: matrix must be square");
  if (gram.rows() != rhs.size())
    throw InvalidInput("regularized_solve: right-hand side size mismatch");

  Scalar scale = gram.diagonal().maxCoeff();
  if (!(scale > Scalar(0))) scale = Scalar(1);

  // The ladder runs kJitterStart..kJitterMax inclusive; half-step slack on
  // the bound keeps accumulated round-off from adding an extra rung.
  Scalar jitter = Scalar(kJitterStart) * scale;
  const Scalar jitter_bound = Scalar(kJitterMax) * scale * Scalar(1.5);
  Scalar tried = jitter;
  while (jitter <= jitter_bound) {
    tried = jitter;
    Eigen::MatrixX<Scalar> work = gram;
    work.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixX<Scalar>> llt(work);
    if (llt.info() == Eigen::Success) return llt.solve(rhs.derived());
    jitter *= Scalar(kJitterGrowth);
  }
  std::ostringstream msg;
  msg << "regularized_solve: factorization failed at maximum jitter " << tried;
  throw NumericalFailure(msg.str());
}

// Closed-form posterior over the integral for a fixed kernel mean vector and
// initial error:
//   mean     = f(X)' K^{-1} mu(X)
//   variance = initial_error - mu(X)' K^{-1} mu(X)
// The variance is clamped to zero when round-off drives it slightly
// negative; a loss beyond kVarianceSlack * initial_error is an error.
template <typename Scalar, typename Derived>
NormalPosterior<Scalar> bq_posterior(const SampleSet<Scalar>& samples,
                                     const GaussianKernel<Scalar>& kernel,
                                     const Eigen::MatrixBase<Derived>& kernel_mean_at_x,
                                     Scalar initial_error) {
  validate(samples);
  validate(kernel);
  if (kernel_mean_at_x.size() != samples.size())
    throw InvalidInput("bq_posterior: kernel mean vector must have one entry per sample");
  if (!(initial_error >= Scalar(0)))
    throw InvalidInput("bq_posterior: initial error must be nonnegative");

  const Eigen::VectorX<Scalar> mean_at_x = kernel_mean_at_x;
  const Eigen::MatrixX<Scalar> gram = gram_matrix(kernel, samples.locations);
  const Eigen::VectorX<Scalar> weights = regularized_solve(gram, mean_at_x);

  NormalPosterior<Scalar> post;
  post.mean = samples.values.dot(weights);
  post.variance = initial_error - mean_at_x.dot(weights);
  if (post.variance < Scalar(0)) {
    if (post.variance >= -Scalar(kVarianceSlack) * initial_error) {
      post.variance = Scalar(0);
    } else {
      std::ostringstream msg;
      msg << "bq_posterior: variance " << post.variance
          << " negative beyond round-off (initial error " << initial_error << ")";
      throw NumericalFailure(msg.str());
    }
  }
  return post;
}

}  // namespace dpmbq
