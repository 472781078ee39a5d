#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "mefit/error.hpp"
#include "mefit/fit.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using mefit::Error;
using mefit::fit_ols;
using mefit::FitResult;

namespace {

// Small xorshift64 generator, unrelated to anything in the library, so
// the randomized checks below do not share code with what they test.
struct XorShift {
  std::uint64_t state;
  explicit XorShift(std::uint64_t seed) : state(seed ? seed : 1) {}
  std::uint64_t next() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

// Independent oracle: solve the normal equations X'X b = X'y by Gaussian
// elimination with partial pivoting.  Returns false when a pivot is too
// small to trust (rank-deficient draw).
bool solve_normal_equations(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                            Eigen::VectorXd& b) {
  const int p = static_cast<int>(x.cols());
  Eigen::MatrixXd a = x.transpose() * x;
  Eigen::VectorXd c = x.transpose() * y;
  for (int k = 0; k < p; ++k) {
    int pivot = k;
    for (int i = k + 1; i < p; ++i) {
      if (std::abs(a(i, k)) > std::abs(a(pivot, k))) pivot = i;
    }
    if (std::abs(a(pivot, k)) < 1e-8) return false;
    a.row(k).swap(a.row(pivot));
    std::swap(c[k], c[pivot]);
    for (int i = k + 1; i < p; ++i) {
      const double m = a(i, k) / a(k, k);
      a.row(i) -= m * a.row(k);
      c[i] -= m * c[k];
    }
  }
  b.resize(p);
  for (int k = p - 1; k >= 0; --k) {
    double s = c[k];
    for (int j = k + 1; j < p; ++j) s -= a(k, j) * b[j];
    b[k] = s / a(k, k);
  }
  return true;
}

}  // namespace

TEST_CASE("recovers an exact linear relationship", "[fit]") {
  Eigen::MatrixXd x(5, 2);
  Eigen::VectorXd y(5);
  for (int i = 0; i < 5; ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = i;
    y[i] = 2.0 + 3.0 * i;
  }
  const FitResult res = fit_ols(x, y);
  CHECK(res.rank == 2);
  CHECK(res.n == 5);
  CHECK(res.df_residual == 3);
  CHECK_THAT(res.coefficients[0], WithinAbs(2.0, 1e-12));
  CHECK_THAT(res.coefficients[1], WithinAbs(3.0, 1e-12));
  CHECK(res.rss <= 1e-20);
  CHECK(!res.aliased[0]);
  CHECK(!res.aliased[1]);
}

TEST_CASE("three-point fit matches hand-solved normal equations", "[fit]") {
  // x = (0, 1, 2), y = (0, 1, 1):
  //   X'X = [3 3; 3 5], X'y = (2, 3), so b = (1/6, 1/2),
  //   residuals (-1/6, 1/3, -1/6), rss = 1/6.
  Eigen::MatrixXd x(3, 2);
  x << 1, 0, 1, 1, 1, 2;
  Eigen::VectorXd y(3);
  y << 0, 1, 1;
  const FitResult res = fit_ols(x, y);
  CHECK_THAT(res.coefficients[0], WithinAbs(1.0 / 6.0, 1e-14));
  CHECK_THAT(res.coefficients[1], WithinAbs(0.5, 1e-14));
  CHECK_THAT(res.rss, WithinAbs(1.0 / 6.0, 1e-14));
  CHECK(res.tss == 2.0);
  CHECK(res.df_residual == 1);
  CHECK(res.param_count() == 3);
}

TEST_CASE("a duplicated column is aliased, not fatal", "[fit]") {
  Eigen::MatrixXd x(6, 3);
  Eigen::VectorXd y(6);
  for (int i = 0; i < 6; ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = 0.5 * i - 1.0;
    x(i, 2) = x(i, 1);  // exact copy
    y[i] = 1.0 + 0.3 * i + ((i % 2 == 0) ? 0.05 : -0.05);
  }
  const FitResult res = fit_ols(x, y);
  CHECK(res.rank == 2);
  CHECK(res.df_residual == 4);
  CHECK(!res.aliased[0]);
  // Exactly one of the two copies survives; the other is NaN.
  CHECK(static_cast<int>(res.aliased[1]) + static_cast<int>(res.aliased[2]) ==
        1);
  int nan_count = 0;
  for (int j = 0; j < 3; ++j) {
    if (std::isnan(res.coefficients[j])) ++nan_count;
  }
  CHECK(nan_count == 1);

  // The fit itself is the same as dropping the duplicate up front.
  const FitResult two = fit_ols(x.leftCols(2), y);
  CHECK_THAT(res.rss, WithinRel(two.rss, 1e-12));
}

TEST_CASE("agrees with a normal-equations solver on random problems", "[fit]") {
  XorShift rng(20240831);
  int checked = 0;
  for (int instance = 0; instance < 100; ++instance) {
    const int n = 3 + static_cast<int>(rng.next() % 6);  // 3..8 rows
    const int p = 1 + static_cast<int>(rng.next() % 3);  // 1..3 columns
    if (p > n) continue;
    Eigen::MatrixXd x(n, p);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < p; ++j) x(i, j) = rng.uniform(-2.0, 2.0);
      y[i] = rng.uniform(-2.0, 2.0);
    }
    Eigen::VectorXd b;
    if (!solve_normal_equations(x, y, b)) continue;
    ++checked;

    const FitResult res = fit_ols(x, y);
    REQUIRE(res.rank == p);
    const double want_rss = (y - x * b).squaredNorm();
    CHECK_THAT(res.rss, WithinAbs(want_rss, 1e-8));
    // Least squares residuals are orthogonal to the column space.
    Eigen::VectorXd fitted = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < p; ++j) fitted += res.coefficients[j] * x.col(j);
    const Eigen::VectorXd r = y - fitted;
    CHECK((x.transpose() * r).lpNorm<Eigen::Infinity>() < 1e-8);
  }
  // The draws above are almost surely full rank; make sure the loop
  // actually exercised the comparison.
  CHECK(checked >= 90);
}

TEST_CASE("an empty design leaves the response unexplained", "[fit]") {
  Eigen::MatrixXd x(4, 0);
  Eigen::VectorXd y(4);
  y << 1, 2, 3, 4;
  const FitResult res = fit_ols(x, y);
  CHECK(res.rank == 0);
  CHECK(res.rss == 30.0);
  CHECK(res.tss == 30.0);
  CHECK(res.df_residual == 4);
  CHECK(res.coefficients.size() == 0);
}

TEST_CASE("log-likelihood equals the summed Gaussian log density", "[fit]") {
  const std::vector<double> e = {0.3, -0.4, 0.1, 0.25, -0.25};
  const int n = static_cast<int>(e.size());
  double rss = 0.0;
  for (double v : e) rss += v * v;
  const double sigma2 = rss / n;
  double want = 0.0;
  for (double v : e) {
    want += -0.5 * std::log(2.0 * std::numbers::pi * sigma2) -
            v * v / (2.0 * sigma2);
  }
  CHECK_THAT(mefit::gaussian_loglik(rss, n), WithinAbs(want, 1e-12));
}

TEST_CASE("perfect fits have unbounded likelihood", "[fit]") {
  CHECK(std::isinf(mefit::gaussian_loglik(0.0, 5)));
  CHECK(mefit::gaussian_loglik(0.0, 5) > 0);
}

TEST_CASE("information criteria", "[fit]") {
  CHECK_THAT(mefit::aic(568.20, 48), WithinAbs(-1040.4, 1e-9));
  CHECK_THAT(mefit::bic(568.20, 48, 864),
             WithinAbs(-811.84450709740533, 1e-9));
  CHECK_THAT(mefit::bic(568.20, 48, 864), WithinAbs(-811.85, 0.05));
  // More parameters always penalize AIC by 2 per df.
  CHECK_THAT(mefit::aic(0.0, 7) - mefit::aic(0.0, 5), WithinAbs(4.0, 1e-12));
}

TEST_CASE("fit and criteria input validation", "[fit]") {
  Eigen::MatrixXd x0(0, 2);
  Eigen::VectorXd y0(0);
  CHECK_THROWS_AS(fit_ols(x0, y0), Error);

  Eigen::MatrixXd x(3, 1);
  x << 1, 1, 1;
  Eigen::VectorXd y(3);
  y << 1, 2, 3;
  Eigen::VectorXd y_short(2);
  y_short << 1, 2;
  CHECK_THROWS_AS(fit_ols(x, y_short), Error);

  Eigen::MatrixXd x_nan = x;
  x_nan(1, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(fit_ols(x_nan, y), Error);
  Eigen::VectorXd y_nan = y;
  y_nan[2] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(fit_ols(x, y_nan), Error);

  CHECK_THROWS_AS(mefit::gaussian_loglik(-1.0, 5), Error);
  CHECK_THROWS_AS(mefit::gaussian_loglik(1.0, 0), Error);
  CHECK_THROWS_AS(mefit::aic(0.0, 0), Error);
  CHECK_THROWS_AS(mefit::bic(0.0, 1, 0), Error);
  CHECK_THROWS_AS(mefit::bic(0.0, 0, 10), Error);
}

TEST_CASE("fitting a design matrix carries its labels", "[fit]") {
  mefit::DesignMatrix dm;
  dm.values.resize(4, 2);
  dm.values << 1, 0, 1, 1, 1, 2, 1, 3;
  dm.labels = {"(Intercept)", "slope"};
  dm.assign = {0, 1};
  Eigen::VectorXd y(4);
  y << 0.1, 1.2, 1.9, 3.1;
  const FitResult res = fit_ols(dm, y);
  REQUIRE(res.labels.size() == 2);
  CHECK(res.labels[0] == "(Intercept)");
  CHECK(res.labels[1] == "slope");
  CHECK(res.rank == 2);
  // The bare-matrix overload agrees and leaves labels empty.
  const FitResult bare = fit_ols(dm.values, y);
  CHECK(bare.labels.empty());
  CHECK(bare.rss == res.rss);
}
