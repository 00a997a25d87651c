#pragma once

#include <Eigen/Dense>

#include "dpmbq/dp_mixture.hpp"
#include "dpmbq/errors.hpp"
#include "dpmbq/kernel.hpp"

namespace dpmbq {

namespace detail {

inline void check_mean_dims(const MixtureRealisation& real,
                            const GaussianKernel<double>& kernel) {
  validate(kernel);
  validate(real);
  if (real.dims() != kernel.dims())
    throw InvalidInput("conjugate means: realisation dimension does not match kernel");
}

}  // namespace detail

// Kernel mean of the Gaussian kernel against a Gaussian mixture, evaluated
// at one point:
//
//   mu(x) = amplitude * sum_j w_j prod_k
//           l_k / sqrt(l_k^2 + v_jk) * exp(-(x_k - m_jk)^2 / (2 (l_k^2 + v_jk)))
//
// The amplitude multiplies the whole product once; every per-dimension
// factor is at most one, so 0 < mu(x) <= amplitude.
inline double kernel_mean_point(const Eigen::Ref<const Eigen::VectorXd>& x,
                                const MixtureRealisation& real,
                                const GaussianKernel<double>& kernel) {
  detail::check_mean_dims(real, kernel);
  if (x.size() != kernel.dims())
    throw InvalidInput("kernel_mean_point: point dimension does not match kernel");

  const Eigen::Index count = real.components();
  const Eigen::Array<double, 1, Eigen::Dynamic> lam2 =
      kernel.lengthscales.array().square().transpose();
  const Eigen::Array<double, 1, Eigen::Dynamic> xr = x.transpose().array();

  const Eigen::ArrayXXd widened = real.variances.array().rowwise() + lam2;
  const Eigen::ArrayXXd factors =
      (lam2.replicate(count, 1) / widened).sqrt() *
      (-(real.means.array().rowwise() - xr).square() / (2.0 * widened)).exp();

  return kernel.amplitude * (real.weights.array() * factors.rowwise().prod()).sum();
}

inline Eigen::VectorXd kernel_mean_vector(const Eigen::Ref<const Eigen::MatrixXd>& locations,
                                          const MixtureRealisation& real,
                                          const GaussianKernel<double>& kernel) {
  if (locations.cols() != kernel.dims())
    throw InvalidInput("kernel_mean_vector: location dimension does not match kernel");
  Eigen::VectorXd out(locations.rows());
  for (Eigen::Index i = 0; i < locations.rows(); ++i)
    out(i) = kernel_mean_point(locations.row(i).transpose(), real, kernel);
  return out;
}

// Double integral of the kernel against the mixture in both arguments:
//
//   amplitude * sum_j sum_j' w_j w_j' prod_k
//     l_k / sqrt(l_k^2 + v_jk + v_j'k)
//     * exp(-(m_jk - m_j'k)^2 / (2 (l_k^2 + v_jk + v_j'k)))
//
// The sum is symmetric in (j, j'), so off-diagonal terms are computed once
// and counted twice. O(N^2 d) at the default truncation.
inline double initial_error(const MixtureRealisation& real,
                            const GaussianKernel<double>& kernel) {
  detail::check_mean_dims(real, kernel);

  const Eigen::Index count = real.components();
  const Eigen::Array<double, 1, Eigen::Dynamic> lam2 =
      kernel.lengthscales.array().square().transpose();

  double total = 0.0;
  for (Eigen::Index j = 0; j < count; ++j) {
    const Eigen::Index m = count - j;
    const Eigen::Array<double, 1, Eigen::Dynamic> offset =
        lam2 + real.variances.row(j).array();
    const Eigen::Array<double, 1, Eigen::Dynamic> mean_j = real.means.row(j).array();

    const Eigen::ArrayXXd widened =
        real.variances.array().bottomRows(m).rowwise() + offset;
    const Eigen::ArrayXd pair_values =
        ((lam2.replicate(m, 1) / widened).sqrt() *
         (-(real.means.array().bottomRows(m).rowwise() - mean_j).square() /
          (2.0 * widened))
             .exp())
            .rowwise()
            .prod();

    const double w_j = real.weights(j);
    const double row =
        (real.weights.segment(j, m).array() * pair_values).sum();
    const double diagonal = w_j * pair_values(0);
    total += w_j * (2.0 * row - diagonal);
  }
  return kernel.amplitude * total;
}

}  // namespace dpmbq
