#include "mefit/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mefit/design.hpp"
#include "mefit/error.hpp"
#include "mefit/special_functions.hpp"

namespace mefit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Relative slack allowed on the nesting requirement rss_reduced >= rss_full.
constexpr double kNestingSlack = 1e-8;

// A full model whose residual SS is this small relative to the total SS is
// treated as an exact (saturated) fit: the F denominator is then numerical
// noise and the statistic is meaningless.
constexpr double kSaturationRatio = 1e-20;

}  // namespace

ComparisonResult f_test(const FitResult& reduced, const FitResult& full) {
  if (reduced.n != full.n) {
    throw Error("f_test: fits have different numbers of observations");
  }
  if (reduced.df_residual == full.df_residual) {
    throw Error("f_test: models have identical residual df; no parameters to test");
  }
  if (reduced.df_residual < full.df_residual) {
    throw Error("f_test: reduced model has fewer residual df than the full model; arguments swapped?");
  }
  const double slack = kNestingSlack * std::max(full.rss, 1.0);
  if (reduced.rss < full.rss - slack) {
    throw Error("f_test: reduced rss is below full rss; the models are not nested");
  }

  ComparisonResult res;
  res.kind = TestKind::F;
  res.df_num = reduced.df_residual - full.df_residual;
  res.df_den = full.df_residual;
  res.ss_increment = std::max(reduced.rss - full.rss, 0.0);

  const bool no_residual_df = full.df_residual == 0;
  const bool exact_fit = full.rss <= kSaturationRatio * std::max(full.tss, 1.0);
  if (no_residual_df || exact_fit) {
    res.saturated = true;
    res.statistic = kNaN;
    res.p_value = kNaN;
    return res;
  }

  const double ms_increment = res.ss_increment / res.df_num;
  const double ms_residual = full.rss / full.df_residual;
  res.statistic = ms_increment / ms_residual;
  res.p_value = f_upper_tail(res.statistic, res.df_num, res.df_den);
  return res;
}

ComparisonResult lr_test(double loglik0, int df0, double loglik1, int df1) {
  if (df1 <= df0) {
    throw Error("lr_test: df1 must exceed df0 (models are not nested)");
  }
  double chisq = 2.0 * (loglik1 - loglik0);
  ComparisonResult res;
  res.kind = TestKind::Chisq;
  res.df_num = df1 - df0;
  res.df_den = 0;
  if (chisq < 0.0) {
    if (chisq < -1e-8) {
      throw Error("lr_test: loglik1 is below loglik0 beyond numerical slack; the models are not nested");
    }
    chisq = 0.0;
    res.clamped = true;
  }
  res.statistic = chisq;
  res.p_value = chisq_upper_tail(chisq, res.df_num);
  return res;
}

AnovaTable sequential_anova(const Formula& f, const Dataset& ds,
                            ContrastScheme scheme) {
  if (f.terms.empty()) {
    throw Error("sequential_anova: formula has no terms");
  }

  // Build the full design once.  The coding rule is prefix-stable (a term's
  // coding depends only on earlier terms), so the first columns with
  // assign <= k form exactly the design of the k-term prefix model.
  const DesignMatrix dm = build_design(f, ds, scheme);
  const Eigen::VectorXd& y = ds.numeric(f.response).values;

  const int n_terms = static_cast<int>(f.terms.size());
  std::vector<int> prefix_cols(static_cast<std::size_t>(n_terms) + 1, 0);
  for (std::size_t j = 0; j < dm.assign.size(); ++j) {
    for (int k = dm.assign[j]; k <= n_terms; ++k) {
      prefix_cols[static_cast<std::size_t>(k)] += 1;
    }
  }

  std::vector<double> rss(static_cast<std::size_t>(n_terms) + 1);
  std::vector<int> rank(static_cast<std::size_t>(n_terms) + 1);
  for (int k = 0; k <= n_terms; ++k) {
    const int p = prefix_cols[static_cast<std::size_t>(k)];
    const FitResult fr = fit_ols(dm.values.leftCols(p), y);
    rss[static_cast<std::size_t>(k)] = fr.rss;
    rank[static_cast<std::size_t>(k)] = fr.rank;
  }

  AnovaTable table;
  const double full_rss = rss[static_cast<std::size_t>(n_terms)];
  const int full_rank = rank[static_cast<std::size_t>(n_terms)];
  table.residual_df = static_cast<int>(y.size()) - full_rank;
  table.residual_ss = full_rss;
  table.residual_ms =
      table.residual_df > 0 ? full_rss / table.residual_df : kNaN;

  const bool denom_ok = table.residual_df > 0 && table.residual_ms > 0.0;
  for (int k = 0; k < n_terms; ++k) {
    AnovaRow row;
    row.term = f.terms[static_cast<std::size_t>(k)].label();
    row.df = rank[static_cast<std::size_t>(k) + 1] -
             rank[static_cast<std::size_t>(k)];
    row.sum_sq = std::max(rss[static_cast<std::size_t>(k)] -
                              rss[static_cast<std::size_t>(k) + 1],
                          0.0);
    row.mean_sq = row.df > 0 ? row.sum_sq / row.df : kNaN;
    if (row.df > 0 && denom_ok) {
      row.f_value = row.mean_sq / table.residual_ms;
      row.p_value = f_upper_tail(row.f_value, row.df, table.residual_df);
    } else {
      row.f_value = kNaN;
      row.p_value = kNaN;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace mefit
