#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "mefit/contrasts.hpp"
#include "mefit/data.hpp"
#include "mefit/formula.hpp"

namespace mefit {

/// An N x P model matrix with column labels and a per-column index of
/// the originating term (0 = intercept, i = i-th term of the formula,
/// 1-based).
struct DesignMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> labels;
  std::vector<int> assign;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
};

/// Compiles a formula plus a dataset into a design matrix.
///
/// Terms are processed in canonical order.  Within a term, each factor
/// is contrast-coded (K-1 columns, using `scheme`) iff the term's margin
/// with that factor removed appears earlier in the model — an earlier
/// term, or the intercept when the margin is empty; otherwise the factor
/// is dummy-coded (K indicator columns).  A term's columns are all
/// products of one chosen column per constituent variable, numerics
/// contributing their value column.  When the intercept is absent, the
/// first all-factor term gets full dummy coding and stands in for the
/// intercept in later margin lookups.
DesignMatrix build_design(const Formula& f, const Dataset& ds,
                          ContrastScheme scheme = ContrastScheme::sum);

/// True iff each matrix's columns lie in the other's column space: the
/// residual of projecting every column onto the other matrix's span is
/// below tol times the column norm.
bool column_span_equal(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                       double tol = 1e-8);

inline bool column_span_equal(const DesignMatrix& a, const DesignMatrix& b,
                              double tol = 1e-8) {
  return column_span_equal(a.values, b.values, tol);
}

}  // namespace mefit
