#pragma once

#include <string>
#include <vector>

#include "mefit/contrasts.hpp"
#include "mefit/data.hpp"
#include "mefit/fit.hpp"
#include "mefit/formula.hpp"
#include "mefit/inference.hpp"

namespace mefit {

/// The reduced model for testing the main effect of `effect` while keeping
/// its interaction with `across`: the formula, the (possibly augmented)
/// dataset it is to be fitted on, and the names of any generated columns.
struct ReducedModel {
  Formula formula;
  Dataset data;
  std::vector<std::string> generated_columns;
};

/// Constructs the reduced model that omits the main effect of `effect`
/// but retains the `effect:across` interaction.
///
/// When `across` is numeric the formula is simply
/// `response ~ across + effect:across` and the dataset is returned
/// unchanged.  When `across` is a K-level factor it cannot appear in the
/// formula directly — the coding rules would then rebuild the full
/// interaction span and the reduced model would equal the full one.
/// Instead the factor is converted to K-1 explicit numeric columns
/// `across1` .. `across<K-1>` under a sum-to-zero scheme, and the formula
/// becomes `response ~ across1 + ... + across<K-1> + effect:across1 +
/// ... + effect:across<K-1>`.
///
/// Throws Error when effect == across, when a required column is missing,
/// when a generated column name collides with an existing column, or when
/// `scheme` is not a true (sum-to-zero) contrast scheme.
ReducedModel reduced_formula(const std::string& response,
                             const std::string& effect,
                             const std::string& across, const Dataset& ds,
                             ContrastScheme scheme = ContrastScheme::sum);

/// Everything produced by one main-effect test: the two formulas, the two
/// fits, the nested comparison, and data-quality annotations.
struct MainEffectTest {
  std::string effect;
  std::string across;
  ContrastScheme scheme = ContrastScheme::sum;
  Formula full_formula;
  Formula reduced_formula;
  std::vector<std::string> generated_columns;
  FitResult full_fit;
  FitResult reduced_fit;
  ComparisonResult result;
  /// True when some cross-cell of the two factors has no observations
  /// (the main effect is then not guaranteed to be estimable).
  bool empty_cells = false;
  /// False when the factor cells have unequal observation counts.  The
  /// test remains valid, but the tested quantity is the unweighted
  /// average effect across levels, not the data-weighted average.
  bool balanced = true;
};

/// Tests the main effect of `effect` in the presence of its interaction
/// with `across`: fits the full model `response ~ effect*across` and the
/// reduced model from reduced_formula(), and compares them with a nested
/// F-test.  A saturated full fit (zero residual SS) yields a flagged
/// result whose SS increment is still meaningful.
MainEffectTest test_main_effect(const Dataset& ds, const std::string& response,
                                const std::string& effect,
                                const std::string& across,
                                ContrastScheme scheme = ContrastScheme::sum);

/// One-paragraph plain-text description of the test suitable for a
/// methods section: how the reduced model was built, which models were
/// compared, and the resulting statistic.
std::string methods_summary(const MainEffectTest& test);

}  // namespace mefit
