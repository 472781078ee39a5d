#include "mefit/maineffect.hpp"

#include <cstdio>
#include <sstream>
#include <utility>

#include "mefit/design.hpp"
#include "mefit/error.hpp"

namespace mefit {

namespace {

std::string join(const std::vector<std::string>& parts,
                 const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

std::string fmt4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

ReducedModel reduced_formula(const std::string& response,
                             const std::string& effect,
                             const std::string& across, const Dataset& ds,
                             ContrastScheme scheme) {
  if (effect == across) {
    throw Error("reduced_formula: effect and across must name different variables");
  }
  for (const std::string& name : {response, effect, across}) {
    if (!ds.has_column(name)) {
      throw DataError("reduced_formula: no column named '" + name + "'");
    }
  }
  if (!is_true_contrast(scheme)) {
    throw Error(
        "reduced_formula: treatment coding is not sum-to-zero, so the "
        "retained interaction terms would describe behavior at the baseline "
        "level of " + across + " rather than its average; use sum or helmert");
  }

  ReducedModel rm;
  rm.data = ds;
  rm.formula.response = response;
  rm.formula.intercept = true;

  const Column& across_col = ds.column(across);
  if (is_numeric(across_col)) {
    rm.formula.terms.push_back(Term({across}));
    rm.formula.terms.push_back(Term({effect, across}));
    return rm;
  }

  // Factor case: the factor itself must not appear in the reduced formula
  // (the coding rules would rebuild the full interaction span).  Replace
  // it with explicit sum-to-zero numeric columns.
  const auto& across_factor = std::get<FactorColumn>(across_col);
  std::vector<CodedColumn> coded = sum_code_factor(across, across_factor, scheme);
  for (const CodedColumn& c : coded) {
    if (ds.has_column(c.name)) {
      throw DataError("reduced_formula: generated column '" + c.name +
                      "' collides with an existing column");
    }
  }
  for (CodedColumn& c : coded) {
    rm.data.add_numeric(c.name, std::move(c.values));
    rm.generated_columns.push_back(c.name);
  }
  for (const std::string& name : rm.generated_columns) {
    rm.formula.terms.push_back(Term({name}));
  }
  for (const std::string& name : rm.generated_columns) {
    rm.formula.terms.push_back(Term({effect, name}));
  }
  return rm;
}

MainEffectTest test_main_effect(const Dataset& ds, const std::string& response,
                                const std::string& effect,
                                const std::string& across,
                                ContrastScheme scheme) {
  if (ds.n_rows() == 0) {
    throw DataError("test_main_effect: dataset has no rows");
  }
  ReducedModel rm = reduced_formula(response, effect, across, ds, scheme);

  MainEffectTest test;
  test.effect = effect;
  test.across = across;
  test.scheme = scheme;
  test.reduced_formula = rm.formula;
  test.generated_columns = rm.generated_columns;

  test.full_formula.response = response;
  test.full_formula.intercept = true;
  test.full_formula.terms = {Term({effect}), Term({across}),
                             Term({effect, across})};

  const DesignMatrix full_dm = build_design(test.full_formula, rm.data, scheme);

  // Self-check: listing the main effects in the other order changes the
  // coding choices but must span the same column space.
  Formula reordered = test.full_formula;
  std::swap(reordered.terms[0], reordered.terms[1]);
  if (!column_span_equal(full_dm, build_design(reordered, rm.data, scheme))) {
    throw Error(
        "test_main_effect: internal consistency check failed; the full "
        "design's column space depends on term order");
  }

  // Data-quality annotations over whichever of the two variables are
  // factors: empty cells endanger estimability, unequal counts change the
  // reading of the tested quantity (unweighted vs. weighted average).
  std::vector<std::string> factor_vars;
  if (is_factor(ds.column(effect))) factor_vars.push_back(effect);
  if (is_factor(ds.column(across))) factor_vars.push_back(across);
  if (!factor_vars.empty()) {
    const CellMeans cells = factor_cell_means(ds, response, factor_vars);
    const int first = cells.counts.empty() ? 0 : cells.counts.front();
    for (int c : cells.counts) {
      if (c == 0) test.empty_cells = true;
      if (c != first) test.balanced = false;
    }
  }

  const DesignMatrix reduced_dm = build_design(rm.formula, rm.data, scheme);
  const Eigen::VectorXd& y = rm.data.numeric(response).values;
  test.full_fit = fit_ols(full_dm, y);
  test.reduced_fit = fit_ols(reduced_dm, y);
  if (test.reduced_fit.df_residual == test.full_fit.df_residual) {
    std::string msg =
        "test_main_effect: the reduced model spans the same column space as "
        "the full model, so no main-effect contrast of " + effect +
        " is estimable";
    if (test.empty_cells) {
      msg += " (some factor cells have no observations)";
    }
    throw Error(msg);
  }
  test.result = f_test(test.reduced_fit, test.full_fit);
  return test;
}

std::string methods_summary(const MainEffectTest& test) {
  std::ostringstream out;
  out << "We tested for a main effect of " << test.effect
      << " in the presence of the " << test.effect << ":" << test.across
      << " interaction. ";
  if (!test.generated_columns.empty()) {
    out << test.across << " was converted to "
        << test.generated_columns.size() << " numeric column"
        << (test.generated_columns.size() == 1 ? "" : "s") << " ("
        << join(test.generated_columns, ", ") << ") under "
        << to_string(test.scheme)
        << " coding, which places the average over its levels at zero, so "
           "the terms dropped from the reduced model carry the effect of "
        << test.effect << " averaged across " << test.across << ". ";
  } else {
    out << "Since " << test.across
        << " is numeric, the reduced model keeps the interaction and drops "
           "only the "
        << test.effect << " main effect, so the comparison assesses the "
        << "effect of " << test.effect << " at " << test.across << " = 0. ";
  }
  out << "The reduced model " << render(test.reduced_formula)
      << " was compared against the full model " << render(test.full_formula)
      << " with a nested F-test";
  if (test.result.saturated) {
    out << "; the full model fits the data exactly, so the F statistic is "
           "undefined and only the sum-of-squares increment ("
        << fmt4(test.result.ss_increment) << ") is reported.";
  } else {
    out << ": F(" << test.result.df_num << ", " << test.result.df_den
        << ") = " << fmt4(test.result.statistic) << ", p = "
        << fmt4(test.result.p_value) << ".";
  }
  if (!test.balanced) {
    out << " Cell counts are unequal; the tested quantity is the unweighted "
           "average effect across "
        << test.across << " levels, not the data-weighted one.";
  }
  if (test.empty_cells) {
    out << " Warning: some factor cells contain no observations, so the "
           "main effect may not be estimable.";
  }
  return out.str();
}

}  // namespace mefit
