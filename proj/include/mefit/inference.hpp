#pragma once

#include <string>
#include <vector>

#include "mefit/contrasts.hpp"
#include "mefit/data.hpp"
#include "mefit/fit.hpp"
#include "mefit/formula.hpp"

namespace mefit {

/// Kind of nested-model comparison.
enum class TestKind { F, Chisq };

/// Result of a nested-model comparison (F-test or likelihood-ratio test).
///
/// For kind == F, `statistic` is the F value with (df_num, df_den) degrees
/// of freedom and `ss_increment` is the residual-sum-of-squares drop from
/// reduced to full.  For kind == Chisq, `statistic` is the chi-squared
/// value with df_num degrees of freedom and df_den is unused (0).
struct ComparisonResult {
  TestKind kind = TestKind::F;
  double statistic = 0.0;
  int df_num = 0;
  int df_den = 0;
  double p_value = 1.0;
  double ss_increment = 0.0;
  /// True when the full model fits exactly (residual SS ~ 0 or no residual
  /// degrees of freedom), leaving the F statistic undefined.  In that case
  /// `statistic` and `p_value` are NaN but `ss_increment` is still valid.
  bool saturated = false;
  /// True when a slightly negative chi-squared (floating-point nesting
  /// slack) was clamped to zero.
  bool clamped = false;
};

/// One term row of a sequential ANOVA table.
struct AnovaRow {
  std::string term;
  int df = 0;
  double sum_sq = 0.0;
  double mean_sq = 0.0;
  double f_value = 0.0;  // NaN when undefined (df == 0 or no residual)
  double p_value = 0.0;  // NaN when f_value is NaN
};

/// Sequential (Type-I) ANOVA decomposition: one row per term, in formula
/// order, plus the residual line.  Term SS values sum with the residual SS
/// to the total SS of the base model (corrected total when the formula has
/// an intercept).
struct AnovaTable {
  std::vector<AnovaRow> rows;
  int residual_df = 0;
  double residual_ss = 0.0;
  double residual_ms = 0.0;
};

/// Compares a reduced model against a full model it is nested in.
///
/// F = ((rss0 - rss1) / (df0 - df1)) / (rss1 / df1) with df0/df1 the
/// residual degrees of freedom, and the p-value is the upper tail of the
/// F(df0 - df1, df1) distribution.
///
/// Throws Error when the fits have different n, when the residual degrees
/// of freedom do not strictly decrease (nothing to test), or when the
/// reduced RSS is smaller than the full RSS beyond numerical slack (the
/// models cannot be nested).  A full model with (near-)zero residual SS or
/// zero residual df yields a result flagged `saturated` instead of a throw.
ComparisonResult f_test(const FitResult& reduced, const FitResult& full);

/// Likelihood-ratio chi-squared test from two log-likelihoods.
///
/// chisq = 2 * (loglik1 - loglik0), df = df1 - df0, p = upper tail of the
/// chi-squared distribution.  Requires df1 > df0.  A slightly negative
/// statistic (>= -1e-8) is clamped to zero and flagged; anything more
/// negative is an error, since the models cannot then be nested.
ComparisonResult lr_test(double loglik0, int df0, double loglik1, int df1);

/// Builds the sequential (Type-I) ANOVA table for `f` on `ds`.
///
/// Fits the ascending chain of models -- intercept only, then one more
/// term at a time in formula order -- and reports each term's SS as the
/// drop in residual SS when it enters.  F values use the final model's
/// residual mean square; they are NaN when that mean square is zero or the
/// term adds no estimable parameters.
AnovaTable sequential_anova(const Formula& f, const Dataset& ds,
                            ContrastScheme scheme = ContrastScheme::sum);

}  // namespace mefit
