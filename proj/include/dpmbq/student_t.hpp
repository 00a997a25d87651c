#pragma once

#include <cmath>

#include "dpmbq/errors.hpp"

namespace dpmbq {

inline double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

namespace detail {

// Continued fraction for the regularized incomplete beta (modified Lentz).
inline double beta_continued_fraction(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-15;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;

  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;

  for (int m = 1; m <= 300; ++m) {
    const int m2 = 2 * m;
    double coeff = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + coeff * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + coeff / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;

    coeff = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + coeff * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + coeff / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < eps) break;
  }
  return h;
}

}  // namespace detail

// Regularized incomplete beta I_x(a, b).
inline double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0))
    throw InvalidInput("incomplete_beta: shape parameters must be positive");
  if (!(x >= 0.0) || !(x <= 1.0))
    throw InvalidInput("incomplete_beta: x must lie in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;

  const double front =
      std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b)) / a;
  if (x < (a + 1.0) / (a + b + 2.0))
    return front * detail::beta_continued_fraction(a, b, x);
  const double front_sym =
      std::exp(b * std::log1p(-x) + a * std::log(x) - log_beta(b, a)) / b;
  return 1.0 - front_sym * detail::beta_continued_fraction(b, a, 1.0 - x);
}

// Inverse of I_x(a, b) in x, by bisection; I is monotone in x.
inline double inverse_incomplete_beta(double a, double b, double p) {
  if (!(p >= 0.0) || !(p <= 1.0))
    throw InvalidInput("inverse_incomplete_beta: p must lie in [0, 1]");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (incomplete_beta(a, b, mid) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Quantile of Student's t with `dof` degrees of freedom. Uses the tail
// identity P(T > t) = I_{dof/(dof+t^2)}(dof/2, 1/2) / 2 for t >= 0.
inline double student_t_quantile(double p, double dof) {
  if (!(dof > 0.0)) throw InvalidInput("student_t_quantile: dof must be positive");
  if (!(p > 0.0) || !(p < 1.0))
    throw InvalidInput("student_t_quantile: p must lie in (0, 1)");
  if (p == 0.5) return 0.0;
  const double tail = p < 0.5 ? p : 1.0 - p;
  const double x = inverse_incomplete_beta(0.5 * dof, 0.5, 2.0 * tail);
  const double t = std::sqrt(dof * (1.0 - x) / x);
  return p < 0.5 ? -t : t;
}

}  // namespace dpmbq
