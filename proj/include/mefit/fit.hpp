#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "mefit/design.hpp"

namespace mefit {

struct FitOptions {
  /// Columns whose pivot falls below this fraction of the largest pivot
  /// are treated as numerically in the span of earlier columns and
  /// aliased out of the fit.
  double pivot_threshold = 1e-10;
};

/// Result of an ordinary least squares fit.
struct FitResult {
  Eigen::VectorXd coefficients;  // NaN at aliased positions
  std::vector<bool> aliased;
  std::vector<std::string> labels;  // empty when fit from a bare matrix
  double rss = 0.0;
  double tss = 0.0;  // uncorrected total sum of squares, |y|^2
  int rank = 0;
  int df_residual = 0;
  int n = 0;
  double loglik = 0.0;

  /// Parameter count used for information criteria: rank plus one for
  /// the residual variance.
  int param_count() const { return rank + 1; }
};

/// Minimizes |y - X b|^2 via a column-pivoting QR factorization.
/// Columns numerically dependent on earlier ones are aliased: their
/// coefficient is reported as NaN and the rank drops accordingly.
/// Throws on zero rows, shape mismatch or non-finite input.
FitResult fit_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                  const FitOptions& options = {});
FitResult fit_ols(const DesignMatrix& dm, const Eigen::VectorXd& y,
                  const FitOptions& options = {});

/// Gaussian log-likelihood of an OLS fit at the ML variance estimate:
/// -(n/2) (log 2*pi + log(rss/n) + 1).  An exact fit (rss == 0) has an
/// unbounded likelihood and returns +infinity.
double gaussian_loglik(double rss, int n);

/// Akaike information criterion, -2 loglik + 2 df.
double aic(double loglik, int df);
/// Bayesian information criterion, -2 loglik + df log(n).
double bic(double loglik, int df, int n);

}  // namespace mefit
