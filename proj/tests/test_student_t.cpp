#include <doctest.h>

#include <cmath>

#include "dpmbq/student_t.hpp"
#include "support/oracles.hpp"

using namespace dpmbq;

TEST_CASE("incomplete beta: uniform case is the identity") {
  for (double x : {0.0, 0.1, 0.35, 0.5, 0.8, 1.0})
    CHECK(incomplete_beta(1.0, 1.0, x) == doctest::Approx(x).epsilon(1e-14));
}

TEST_CASE("incomplete beta: symmetry identity") {
  for (double x : {0.05, 0.3, 0.6, 0.95}) {
    const double direct = incomplete_beta(2.5, 1.5, x);
    const double mirrored = 1.0 - incomplete_beta(1.5, 2.5, 1.0 - x);
    CHECK(direct == doctest::Approx(mirrored).epsilon(1e-13));
  }
}

TEST_CASE("incomplete beta: inverse round-trips") {
  for (double a : {0.5, 1.5, 4.0}) {
    for (double b : {0.5, 2.0}) {
      for (double p : {0.01, 0.2, 0.5, 0.77, 0.99}) {
        const double x = inverse_incomplete_beta(a, b, p);
        CHECK(incomplete_beta(a, b, x) == doctest::Approx(p).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("student t quantile: median and symmetry") {
  CHECK(student_t_quantile(0.5, 3.0) == 0.0);
  for (double p : {0.6, 0.75, 0.9, 0.99})
    CHECK(student_t_quantile(1.0 - p, 7.0) ==
          doctest::Approx(-student_t_quantile(p, 7.0)).epsilon(1e-13));
}

TEST_CASE("student t quantile: three degrees of freedom at 75%") {
  CHECK(student_t_quantile(0.75, 3.0) == doctest::Approx(0.7648923284).epsilon(1e-9));
}

TEST_CASE("student t quantile: agrees with the CDF-inversion oracle") {
  for (double dof : {1.0, 2.0, 3.0, 10.0, 29.0}) {
    for (double p : {0.6, 0.75, 0.9, 0.95, 0.99}) {
      const double closed = student_t_quantile(p, dof);
      const double oracle = test::t_quantile_oracle(p, dof);
      CHECK(std::fabs(closed - oracle) <= 1e-8 * std::max(1.0, std::fabs(oracle)));
    }
  }
}

TEST_CASE("student t quantile: input validation") {
  CHECK_THROWS_AS((void)student_t_quantile(0.0, 3.0), InvalidInput);
  CHECK_THROWS_AS((void)student_t_quantile(1.0, 3.0), InvalidInput);
  CHECK_THROWS_AS((void)student_t_quantile(0.5, 0.0), InvalidInput);
  CHECK_THROWS_AS((void)incomplete_beta(0.0, 1.0, 0.5), InvalidInput);
  CHECK_THROWS_AS((void)incomplete_beta(1.0, 1.0, 1.5), InvalidInput);
}
