#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "mefit/error.hpp"
#include "mefit/special_functions.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using mefit::chisq_upper_tail;
using mefit::Error;
using mefit::f_upper_tail;
using mefit::regularized_gamma_p;
using mefit::regularized_gamma_q;
using mefit::regularized_incomplete_beta;

namespace {

// Independent oracle: Maclaurin series for erf, accurate to ~1e-12 for
// |z| <= 3, which covers the grid below.
double erf_series(double z) {
  double term = z;
  double sum = z;
  for (int n = 1; n < 200; ++n) {
    term *= -z * z / n;
    sum += term / (2 * n + 1);
  }
  return (2.0 / std::sqrt(std::numbers::pi)) * sum;
}

}  // namespace

TEST_CASE("chi-square upper tail matches high-precision references", "[special]") {
  struct Case {
    double x;
    int df;
    double want;
  };
  const Case cases[] = {
      {0.0666, 1, 0.79635307081917919},
      {0.5, 2, 0.77880078307140487},
      {1.0, 2, 0.60653065971263342},
      {4.0, 2, 0.13533528323661269},
      {3.841459, 1, 0.049999994653195766},
      {2.3, 5, 0.80626686988512858},
      {12.7, 4, 0.012838591451519229},
      {88.0, 100, 0.79881936550552053},
      {0.003, 3, 0.99995633737345743},
  };
  for (const Case& c : cases) {
    INFO("x = " << c.x << ", df = " << c.df);
    CHECK_THAT(chisq_upper_tail(c.x, c.df), WithinAbs(c.want, 1e-10));
  }
  // Deep tail: relative accuracy.
  CHECK_THAT(chisq_upper_tail(100.0, 1),
             WithinRel(1.5239706048321052e-23, 1e-8));
}

TEST_CASE("F upper tail matches high-precision references", "[special]") {
  struct Case {
    double x;
    int d1;
    int d2;
    double want;
  };
  const Case cases[] = {
      {0.5, 1, 1, 0.60817344796939273},
      {1.0, 2, 10, 0.40187757201646091},
      {2.5, 3, 17, 0.094282805078947954},
      {0.8452, 1, 24, 0.3670620859372112},
      {5.0, 4, 2, 0.17355371900826446},
      {10.0, 1, 1, 0.19498222904213665},
      {0.01, 7, 3, 0.99999586957789862},
  };
  for (const Case& c : cases) {
    INFO("x = " << c.x << ", d1 = " << c.d1 << ", d2 = " << c.d2);
    CHECK_THAT(f_upper_tail(c.x, c.d1, c.d2), WithinAbs(c.want, 1e-10));
  }
  CHECK_THAT(f_upper_tail(37.5, 2, 200),
             WithinRel(1.4781897393978633e-14, 1e-8));
  CHECK_THAT(f_upper_tail(99.0, 200, 200),
             WithinRel(1.690659363904331e-142, 1e-6));
}

TEST_CASE("chi-square with two degrees of freedom is exp(-x/2)", "[special]") {
  for (double x : {0.5, 1.0, 4.0}) {
    CHECK_THAT(chisq_upper_tail(x, 2), WithinAbs(std::exp(-x / 2), 1e-12));
  }
}

TEST_CASE("F with two numerator df has a closed form", "[special]") {
  // P(F(2, d2) > x) = (d2 / (d2 + 2x))^(d2/2)
  for (int d2 : {1, 4, 9, 30}) {
    for (double x : {0.2, 1.0, 3.7}) {
      const double want = std::pow(d2 / (d2 + 2.0 * x), d2 / 2.0);
      CHECK_THAT(f_upper_tail(x, 2, d2), WithinAbs(want, 1e-12));
    }
  }
}

TEST_CASE("chi-square with one df is the two-sided normal tail", "[special]") {
  for (double x = 0.01; x <= 9.0; x += 0.37) {
    const double z = std::sqrt(x);
    const double want = 1.0 - erf_series(z / std::numbers::sqrt2);
    CHECK_THAT(chisq_upper_tail(x, 1), WithinAbs(want, 1e-10));
  }
}

TEST_CASE("boundary values and domains", "[special]") {
  CHECK(chisq_upper_tail(0.0, 1) == 1.0);
  CHECK(chisq_upper_tail(0.0, 7) == 1.0);
  CHECK(f_upper_tail(0.0, 1, 1) == 1.0);
  CHECK(f_upper_tail(0.0, 3, 9) == 1.0);
  CHECK(chisq_upper_tail(1e4, 2) <= 1e-300);
  CHECK_THROWS_AS(chisq_upper_tail(-0.1, 1), Error);
  CHECK_THROWS_AS(chisq_upper_tail(1.0, 0), Error);
  CHECK_THROWS_AS(f_upper_tail(-1.0, 1, 1), Error);
  CHECK_THROWS_AS(f_upper_tail(1.0, 0, 1), Error);
  CHECK_THROWS_AS(f_upper_tail(1.0, 1, 0), Error);
}

TEST_CASE("regularized gamma halves are complementary", "[special]") {
  for (double a : {0.5, 1.0, 3.5, 20.0}) {
    for (double x : {0.1, 1.0, 5.0, 40.0}) {
      CHECK_THAT(regularized_gamma_p(a, x) + regularized_gamma_q(a, x),
                 WithinAbs(1.0, 1e-12));
    }
  }
  CHECK(regularized_gamma_p(2.0, 0.0) == 0.0);
  CHECK(regularized_gamma_q(2.0, 0.0) == 1.0);
  CHECK_THROWS_AS(regularized_gamma_p(0.0, 1.0), Error);
  CHECK_THROWS_AS(regularized_gamma_p(1.0, -1.0), Error);
}

TEST_CASE("regularized incomplete beta symmetry", "[special]") {
  const std::pair<double, double> shapes[] = {{0.5, 2.0}, {3.0, 7.0},
                                              {12.0, 12.0}};
  for (auto [a, b] : shapes) {
    for (double x : {0.05, 0.3, 0.5, 0.77}) {
      CHECK_THAT(regularized_incomplete_beta(x, a, b),
                 WithinAbs(1.0 - regularized_incomplete_beta(1.0 - x, b, a),
                           1e-12));
    }
  }
  CHECK(regularized_incomplete_beta(0.0, 2.0, 3.0) == 0.0);
  CHECK(regularized_incomplete_beta(1.0, 2.0, 3.0) == 1.0);
  CHECK_THROWS_AS(regularized_incomplete_beta(-0.1, 1.0, 1.0), Error);
  CHECK_THROWS_AS(regularized_incomplete_beta(0.5, 0.0, 1.0), Error);
}

TEST_CASE("upper tails decrease strictly in the statistic", "[special]") {
  double prev_c = 1.0;
  double prev_f = 1.0;
  for (int i = 1; i <= 1000; ++i) {
    const double x = 0.03 * i;
    const double c = chisq_upper_tail(x, 3);
    const double f = f_upper_tail(x, 2, 11);
    REQUIRE(c < prev_c);
    REQUIRE(f < prev_f);
    prev_c = c;
    prev_f = f;
  }
}

TEST_CASE("scaled F tail converges to the chi-square tail", "[special]") {
  const double x = 2.17;
  const int d1 = 3;
  CHECK_THAT(f_upper_tail(x, d1, 1000000),
             WithinAbs(chisq_upper_tail(d1 * x, d1), 1e-4));
}
