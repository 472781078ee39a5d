#include "mefit/fit.hpp"

#include <Eigen/QR>
#include <cmath>
#include <limits>
#include <numbers>

#include "mefit/error.hpp"

namespace mefit {

FitResult fit_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                  const FitOptions& options) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  if (n == 0) throw Error("fit_ols: zero rows");
  if (y.size() != n) {
    throw Error("fit_ols: response length does not match design rows");
  }
  if (!x.allFinite() || !y.allFinite()) {
    throw Error("fit_ols: non-finite values in input");
  }

  FitResult res;
  res.n = static_cast<int>(n);
  res.tss = y.squaredNorm();
  res.coefficients =
      Eigen::VectorXd::Constant(p, std::numeric_limits<double>::quiet_NaN());
  res.aliased.assign(static_cast<std::size_t>(p), true);

  if (p == 0) {
    res.rank = 0;
    res.df_residual = res.n;
    res.rss = res.tss;
    res.loglik = gaussian_loglik(res.rss, res.n);
    return res;
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(options.pivot_threshold);
  const Eigen::Index rank = qr.rank();

  Eigen::VectorXd fitted = Eigen::VectorXd::Zero(n);
  if (rank > 0) {
    Eigen::VectorXd qty = qr.householderQ().adjoint() * y;
    Eigen::VectorXd b = qr.matrixQR()
                            .topLeftCorner(rank, rank)
                            .triangularView<Eigen::Upper>()
                            .solve(qty.head(rank));
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index j = 0; j < rank; ++j) {
      res.coefficients[perm[j]] = b[j];
      res.aliased[static_cast<std::size_t>(perm[j])] = false;
      fitted += b[j] * x.col(perm[j]);
    }
  }

  res.rank = static_cast<int>(rank);
  res.df_residual = res.n - res.rank;
  res.rss = (y - fitted).squaredNorm();
  res.loglik = gaussian_loglik(res.rss, res.n);
  return res;
}

FitResult fit_ols(const DesignMatrix& dm, const Eigen::VectorXd& y,
                  const FitOptions& options) {
  FitResult res = fit_ols(dm.values, y, options);
  res.labels = dm.labels;
  return res;
}

double gaussian_loglik(double rss, int n) {
  if (n < 1) throw Error("gaussian_loglik: n must be >= 1");
  if (rss < 0.0) throw Error("gaussian_loglik: rss must be >= 0");
  if (rss == 0.0) return std::numeric_limits<double>::infinity();
  const double half_n = 0.5 * n;
  return -half_n * (std::log(2.0 * std::numbers::pi) + std::log(rss / n) + 1.0);
}

double aic(double loglik, int df) {
  if (df < 1) throw Error("aic: df must be >= 1");
  return -2.0 * loglik + 2.0 * df;
}

double bic(double loglik, int df, int n) {
  if (df < 1) throw Error("bic: df must be >= 1");
  if (n < 1) throw Error("bic: n must be >= 1");
  return -2.0 * loglik + df * std::log(static_cast<double>(n));
}

}  // namespace mefit
