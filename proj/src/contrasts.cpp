#include "mefit/contrasts.hpp"

namespace mefit {

ContrastScheme contrast_scheme_from_string(const std::string& name) {
  if (name == "treatment") return ContrastScheme::treatment;
  if (name == "sum") return ContrastScheme::sum;
  if (name == "helmert") return ContrastScheme::helmert;
  throw Error("unknown contrast scheme '" + name +
              "' (expected treatment, sum or helmert)");
}

std::string to_string(ContrastScheme scheme) {
  switch (scheme) {
    case ContrastScheme::treatment: return "treatment";
    case ContrastScheme::sum: return "sum";
    case ContrastScheme::helmert: return "helmert";
  }
  return "?";
}

ContrastMatrix contrast_matrix(ContrastScheme scheme, int levels) {
  if (levels < 2) {
    throw Error("contrast matrix needs at least 2 levels, got " +
                std::to_string(levels));
  }
  const int k = levels;
  ContrastMatrix cm;
  cm.levels = k;
  cm.entries = Eigen::MatrixXd::Zero(k, k - 1);
  switch (scheme) {
    case ContrastScheme::treatment:
      cm.entries.bottomRows(k - 1).setIdentity();
      break;
    case ContrastScheme::sum:
      cm.entries.topRows(k - 1).setIdentity();
      cm.entries.row(k - 1).setConstant(-1.0);
      break;
    case ContrastScheme::helmert:
      for (int j = 0; j < k - 1; ++j) {
        for (int i = 0; i <= j; ++i) cm.entries(i, j) = -1.0;
        cm.entries(j + 1, j) = static_cast<double>(j + 1);
      }
      break;
  }
  for (int j = 0; j < k - 1; ++j) {
    cm.suffixes.push_back(std::to_string(j + 1));
  }
  return cm;
}

std::vector<CodedColumn> sum_code_factor(const std::string& name,
                                         const FactorColumn& column,
                                         ContrastScheme scheme) {
  if (!is_true_contrast(scheme)) {
    throw Error("factor '" + name +
                "' cannot be converted with treatment coding; a true "
                "(sum-to-zero) contrast scheme is required");
  }
  const int k = column.level_count();
  ContrastMatrix cm = contrast_matrix(scheme, k);
  const auto n = static_cast<Eigen::Index>(column.codes.size());
  std::vector<CodedColumn> out;
  out.reserve(static_cast<std::size_t>(k - 1));
  for (int j = 0; j < k - 1; ++j) {
    CodedColumn col;
    col.name = name + std::to_string(j + 1);
    col.values.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      col.values[i] = cm.entries(column.codes[static_cast<std::size_t>(i)], j);
    }
    out.push_back(std::move(col));
  }
  return out;
}

}  // namespace mefit
