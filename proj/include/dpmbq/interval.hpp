#pragma once

namespace dpmbq {

struct Interval {
  double lo{0.0};
  double hi{0.0};

  double width() const { return hi - lo; }
  bool contains(double value) const { return lo <= value && value <= hi; }
};

}  // namespace dpmbq
