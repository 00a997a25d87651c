#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "dpmbq/errors.hpp"

namespace dpmbq {

// Tensor-product squared-exponential kernel with one length-scale per
// dimension:
//
//   k(x, x') = amplitude * prod_k exp(-(x_k - x'_k)^2 / (2 lengthscales_k^2))
//
// so k(x, x) == amplitude for every x and k is symmetric by construction.
template <typename Scalar = double>
struct GaussianKernel {
  Scalar amplitude{1};
  Eigen::VectorX<Scalar> lengthscales;

  static GaussianKernel isotropic(Scalar amplitude, Scalar lengthscale,
                                  Eigen::Index dims = 1) {
    return {amplitude, Eigen::VectorX<Scalar>::Constant(dims, lengthscale)};
  }

  Eigen::Index dims() const { return lengthscales.size(); }
};

template <typename Scalar>
void validate(const GaussianKernel<Scalar>& kernel) {
  if (kernel.dims() < 1)
    throw InvalidInput("kernel: need at least one length-scale");
  if (!(kernel.amplitude > Scalar(0)))
    throw InvalidInput("kernel: amplitude must be positive");
  if (!(kernel.lengthscales.array() > Scalar(0)).all())
    throw InvalidInput("kernel: length-scales must be positive");
}

template <typename Scalar, typename DerivedA, typename DerivedB>
Scalar kernel_value(const GaussianKernel<Scalar>& kernel,
                    const Eigen::MatrixBase<DerivedA>& x,
                    const Eigen::MatrixBase<DerivedB>& y) {
  if (x.size() != kernel.dims() || y.size() != kernel.dims())
    throw InvalidInput("kernel_value: point dimension does not match kernel");
  Scalar q = 0;
  for (Eigen::Index k = 0; k < kernel.dims(); ++k) {
    const Scalar d = x(k) - y(k);
    const Scalar l = kernel.lengthscales(k);
    q += d * d / (2 * l * l);
  }
  return kernel.amplitude * std::exp(-q);
}

// n x n kernel matrix over the rows of `locations`. The diagonal is set to
// the amplitude directly and off-diagonal entries are mirrored, so the
// result is bit-for-bit symmetric.
template <typename Scalar, typename Derived>
Eigen::MatrixX<Scalar> gram_matrix(const GaussianKernel<Scalar>& kernel,
                                   const Eigen::MatrixBase<Derived>& locations) {
  validate(kernel);
  if (locations.rows() < 1)
    throw InvalidInput("gram_matrix: need at least one location");
  if (locations.cols() != kernel.dims())
    throw InvalidInput("gram_matrix: location dimension does not match kernel");

  const Eigen::Index n = locations.rows();
  Eigen::MatrixX<Scalar> gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    gram(i, i) = kernel.amplitude;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Scalar v = kernel_value(kernel, locations.row(i), locations.row(j));
      gram(i, j) = v;
      gram(j, i) = v;
    }
  }
  return gram;
}

}  // namespace dpmbq
