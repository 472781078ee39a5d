#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "mefit/data.hpp"
#include "mefit/error.hpp"

namespace mefit {

/// Contrast coding schemes for factors.  `sum` and `helmert` are "true"
/// contrasts (every column sums to zero over the levels); `treatment` is
/// the baseline-reference dummy scheme and is not sum-to-zero.
enum class ContrastScheme { treatment, sum, helmert };

ContrastScheme contrast_scheme_from_string(const std::string& name);
std::string to_string(ContrastScheme scheme);

inline bool is_true_contrast(ContrastScheme scheme) {
  return scheme != ContrastScheme::treatment;
}

/// A K x (K-1) contrast matrix; row i is the numeric code of level i.
/// `suffixes[j]` is the label suffix of column j when attached to a
/// variable name (level name for treatment, "1".."K-1" for sum/helmert).
struct ContrastMatrix {
  int levels = 0;
  Eigen::MatrixXd entries;
  std::vector<std::string> suffixes;
};

/// Standard contrast matrix for a K-level factor:
///   treatment: row 1 all zeros, rows 2..K the (K-1)-identity;
///   sum:       rows 1..K-1 the identity, row K all -1;
///   helmert:   column j is -1 for rows 1..j, +j at row j+1, 0 below.
/// Throws on K < 2.
ContrastMatrix contrast_matrix(ContrastScheme scheme, int levels);

/// One generated numeric column of a converted factor.
struct CodedColumn {
  std::string name;
  Eigen::VectorXd values;
};

/// Converts a factor column into K-1 explicit numeric columns: column j
/// holds contrast_matrix(scheme, K)(level(i), j) at row i, and is named
/// `<name>1` .. `<name><K-1>`.  Only true contrast schemes are allowed;
/// treatment coding does not put grand-average behavior at zero and is
/// rejected.
std::vector<CodedColumn> sum_code_factor(const std::string& name,
                                         const FactorColumn& column,
                                         ContrastScheme scheme);

}  // namespace mefit
