#include "mefit/special_functions.hpp"

#include <cmath>
#include <limits>

#include "mefit/error.hpp"

namespace mefit {

namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr int kMaxIter = 10000;

// Series for P(a,x), valid and fast for x < a+1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a,x), valid and fast for x >= a+1.
// Modified Lentz evaluation.
double gamma_q_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// Continued fraction for the incomplete beta (modified Lentz).
double beta_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw Error(std::string(what) + " must be finite");
  }
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  require_finite(a, "gamma shape");
  require_finite(x, "gamma argument");
  if (a <= 0.0) throw Error("gamma shape must be positive");
  if (x < 0.0) throw Error("gamma argument must be nonnegative");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
  require_finite(a, "gamma shape");
  require_finite(x, "gamma argument");
  if (a <= 0.0) throw Error("gamma shape must be positive");
  if (x < 0.0) throw Error("gamma argument must be nonnegative");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_fraction(a, x);
}

double regularized_incomplete_beta(double x, double a, double b) {
  require_finite(x, "beta argument");
  if (a <= 0.0 || b <= 0.0) throw Error("beta parameters must be positive");
  if (x < 0.0 || x > 1.0) throw Error("beta argument must be in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) -
                                std::lgamma(b) + a * std::log(x) +
                                b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_fraction(b, a, 1.0 - x) / b;
}

double chisq_upper_tail(double x, int df) {
  if (df < 1) throw Error("chi-square df must be >= 1");
  if (!(x >= 0.0)) throw Error("chi-square statistic must be >= 0");
  return regularized_gamma_q(0.5 * df, 0.5 * x);
}

double f_upper_tail(double x, int df1, int df2) {
  if (df1 < 1 || df2 < 1) throw Error("F dfs must be >= 1");
  if (!(x >= 0.0)) throw Error("F statistic must be >= 0");
  if (x == 0.0) return 1.0;
  const double t = df2 / (df2 + static_cast<double>(df1) * x);
  return regularized_incomplete_beta(t, 0.5 * df2, 0.5 * df1);
}

}  // namespace mefit
