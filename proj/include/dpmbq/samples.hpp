#pragma once

#include <Eigen/Dense>
#include <utility>

#include "dpmbq/errors.hpp"

namespace dpmbq {

// The estimator's entire view of the problem: n sample locations (one row
// per sample) and the integrand value at each row. Duplicate rows are kept
// as-is; deduplication would silently change n.
template <typename Scalar = double>
struct SampleSet {
  Eigen::MatrixX<Scalar> locations;  // n x d
  Eigen::VectorX<Scalar> values;     // n

  Eigen::Index size() const { return locations.rows(); }
  Eigen::Index dims() const { return locations.cols(); }
};

template <typename Scalar>
void validate(const SampleSet<Scalar>& samples) {
  if (samples.locations.rows() != samples.values.size())
    throw InvalidInput("sample set: location rows must match value count");
  if (samples.size() < 1)
    throw InvalidInput("sample set: need at least one sample");
  if (samples.dims() < 1)
    throw InvalidInput("sample set: need at least one dimension");
  if (!samples.locations.allFinite() || !samples.values.allFinite())
    throw InvalidInput("sample set: entries must be finite");
}

template <typename DerivedX, typename DerivedF>
SampleSet<typename DerivedX::Scalar> univariate_sample_set(
    const Eigen::MatrixBase<DerivedX>& xs, const Eigen::MatrixBase<DerivedF>& fs) {
  SampleSet<typename DerivedX::Scalar> out;
  out.locations = xs;
  out.values = fs;
  return out;
}

}  // namespace dpmbq
