// mefit — model-formula compiler and linear-model inference tool.
//
// Subcommands:
//   matrix            dump a formula's design matrix as CSV
//   fit               ordinary-least-squares fit of a formula
//   anova             sequential (Type-I) ANOVA table
//   compare           nested-model F comparison of two formulas
//   test-main-effect  main effect of one predictor in the presence of
//                     its interaction with another
//   lrt               likelihood-ratio test from external log-likelihoods
//   simulate          deterministic two-factor factorial data generator

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mefit/contrasts.hpp"
#include "mefit/data.hpp"
#include "mefit/datagen.hpp"
#include "mefit/design.hpp"
#include "mefit/error.hpp"
#include "mefit/fit.hpp"
#include "mefit/formula.hpp"
#include "mefit/inference.hpp"
#include "mefit/maineffect.hpp"

namespace {

using mefit::ContrastScheme;

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// Fixed-width table cell: right-aligned in `width` characters.  Content
// too wide for its column still gets one separating space.
std::string cell(const std::string& s, int width) {
  if (static_cast<int>(s.size()) >= width) return " " + s;
  return std::string(static_cast<std::size_t>(width) - s.size(), ' ') + s;
}

std::string num_or_blank(double v, const char* spec, int width) {
  if (std::isnan(v)) return cell("", width);
  return cell(fmt(spec, v), width);
}

ContrastScheme scheme_option(const std::string& name) {
  return mefit::contrast_scheme_from_string(name);
}

void cmd_matrix(const std::string& csv, const std::string& formula,
                const std::string& contrasts) {
  const mefit::Dataset ds = mefit::read_csv(csv);
  const mefit::Formula f = mefit::parse(formula);
  const mefit::DesignMatrix dm =
      mefit::build_design(f, ds, scheme_option(contrasts));

  mefit::Dataset out;
  for (Eigen::Index j = 0; j < dm.cols(); ++j) {
    out.add_numeric(dm.labels[static_cast<std::size_t>(j)], dm.values.col(j));
  }
  mefit::write_csv(out, std::cout);
}

void cmd_fit(const std::string& csv, const std::string& formula,
             const std::string& contrasts, bool json) {
  const mefit::Dataset ds = mefit::read_csv(csv);
  const mefit::Formula f = mefit::parse(formula);
  const mefit::DesignMatrix dm =
      mefit::build_design(f, ds, scheme_option(contrasts));
  const mefit::FitResult fit =
      mefit::fit_ols(dm, ds.numeric(f.response).values);
  const double fit_aic = mefit::aic(fit.loglik, fit.param_count());
  const double fit_bic = mefit::bic(fit.loglik, fit.param_count(), fit.n);

  if (json) {
    nlohmann::json j;
    j["formula"] = mefit::render(f);
    j["n"] = fit.n;
    j["rank"] = fit.rank;
    j["df_residual"] = fit.df_residual;
    j["rss"] = fit.rss;
    j["loglik"] = fit.loglik;
    j["df"] = fit.param_count();
    j["aic"] = fit_aic;
    j["bic"] = fit_bic;
    j["coefficients"] = nlohmann::json::array();
    for (std::size_t k = 0; k < fit.labels.size(); ++k) {
      nlohmann::json c;
      c["label"] = fit.labels[k];
      if (fit.aliased[k]) {
        c["estimate"] = nullptr;
      } else {
        c["estimate"] = fit.coefficients[static_cast<Eigen::Index>(k)];
      }
      j["coefficients"].push_back(c);
    }
    std::cout << j.dump(2) << "\n";
    return;
  }

  std::cout << "Formula: " << mefit::render(f) << "\n\nCoefficients:\n";
  std::size_t label_width = 8;
  for (const std::string& l : fit.labels) {
    label_width = std::max(label_width, l.size());
  }
  for (std::size_t k = 0; k < fit.labels.size(); ++k) {
    std::cout << "  " << fit.labels[k]
              << std::string(label_width - fit.labels[k].size(), ' ') << "  ";
    if (fit.aliased[k]) {
      std::cout << "NA (aliased)";
    } else {
      std::cout << fmt("%.6g", fit.coefficients[static_cast<Eigen::Index>(k)]);
    }
    std::cout << "\n";
  }
  std::cout << "\nResidual SS: " << fmt("%.6g", fit.rss) << " on "
            << fit.df_residual << " degrees of freedom (n = " << fit.n
            << ", rank = " << fit.rank << ")\n";
  std::cout << "logLik: " << fmt("%.4f", fit.loglik)
            << " (df = " << fit.param_count() << ")\n";
  std::cout << "AIC: " << fmt("%.4f", fit_aic)
            << "   BIC: " << fmt("%.4f", fit_bic) << "\n";
}

void cmd_anova(const std::string& csv, const std::string& formula,
               const std::string& contrasts) {
  const mefit::Dataset ds = mefit::read_csv(csv);
  const mefit::Formula f = mefit::parse(formula);
  const mefit::AnovaTable table =
      mefit::sequential_anova(f, ds, scheme_option(contrasts));

  std::size_t term_width = 9;  // "Residuals"
  for (const mefit::AnovaRow& row : table.rows) {
    term_width = std::max(term_width, row.term.size());
  }
  auto term_cell = [&](const std::string& s) {
    return s + std::string(term_width - s.size(), ' ');
  };

  std::cout << term_cell("") << cell("Df", 4) << cell("Sum Sq", 11)
            << cell("Mean Sq", 11) << cell("F value", 10)
            << cell("Pr(>F)", 10) << "\n";
  for (const mefit::AnovaRow& row : table.rows) {
    std::cout << term_cell(row.term) << cell(std::to_string(row.df), 4)
              << num_or_blank(row.sum_sq, "%.5g", 11)
              << num_or_blank(row.mean_sq, "%.5g", 11)
              << num_or_blank(row.f_value, "%.4g", 10)
              << num_or_blank(row.p_value, "%.4g", 10) << "\n";
  }
  std::cout << term_cell("Residuals") << cell(std::to_string(table.residual_df), 4)
            << num_or_blank(table.residual_ss, "%.5g", 11)
            << num_or_blank(table.residual_ms, "%.5g", 11) << "\n";
}

void print_comparison(const mefit::FitResult& reduced,
                      const mefit::FitResult& full,
                      const mefit::ComparisonResult& cmp) {
  std::cout << cell("", 3) << cell("Res.Df", 8) << cell("RSS", 11)
            << cell("Df", 4) << cell("Sum of Sq", 11) << cell("F", 9)
            << cell("Pr(>F)", 10) << "\n";
  std::cout << cell("1", 3) << cell(std::to_string(reduced.df_residual), 8)
            << num_or_blank(reduced.rss, "%.5f", 11) << "\n";
  std::cout << cell("2", 3) << cell(std::to_string(full.df_residual), 8)
            << num_or_blank(full.rss, "%.5f", 11)
            << cell(std::to_string(cmp.df_num), 4)
            << num_or_blank(cmp.ss_increment, "%.7f", 11)
            << num_or_blank(cmp.statistic, "%.4f", 9)
            << num_or_blank(cmp.p_value, "%.4f", 10) << "\n";
  if (cmp.saturated) {
    std::cout << "Note: the full model fits exactly; F is undefined and only "
                 "the Sum of Sq column is meaningful.\n";
  }
}

void cmd_compare(const std::string& csv, const std::string& reduced,
                 const std::string& full, const std::string& contrasts) {
  const mefit::Dataset ds = mefit::read_csv(csv);
  const ContrastScheme scheme = scheme_option(contrasts);
  const mefit::Formula f0 = mefit::parse(reduced);
  const mefit::Formula f1 = mefit::parse(full);
  if (f0.response != f1.response) {
    throw mefit::Error("compare: the two formulas have different responses");
  }
  const Eigen::VectorXd& y = ds.numeric(f0.response).values;
  const mefit::FitResult fit0 =
      mefit::fit_ols(mefit::build_design(f0, ds, scheme), y);
  const mefit::FitResult fit1 =
      mefit::fit_ols(mefit::build_design(f1, ds, scheme), y);
  const mefit::ComparisonResult cmp = mefit::f_test(fit0, fit1);

  std::cout << "Model 1: " << mefit::render(f0) << "\n";
  std::cout << "Model 2: " << mefit::render(f1) << "\n";
  print_comparison(fit0, fit1, cmp);
}

void cmd_test_main_effect(const std::string& csv, const std::string& response,
                          const std::string& effect, const std::string& across,
                          const std::string& contrasts) {
  const mefit::Dataset ds = mefit::read_csv(csv);
  const mefit::MainEffectTest test = mefit::test_main_effect(
      ds, response, effect, across, scheme_option(contrasts));

  std::cout << "Full model:    " << mefit::render(test.full_formula) << "\n";
  std::cout << "Reduced model: " << mefit::render(test.reduced_formula)
            << "\n";
  if (!test.generated_columns.empty()) {
    std::cout << "Generated columns: ";
    for (std::size_t i = 0; i < test.generated_columns.size(); ++i) {
      std::cout << (i ? ", " : "") << test.generated_columns[i];
    }
    std::cout << " (" << mefit::to_string(test.scheme) << " coding)\n";
  }
  std::cout << "\n";
  print_comparison(test.reduced_fit, test.full_fit, test.result);
  std::cout << "\n" << mefit::methods_summary(test) << "\n";
}

void cmd_lrt(double loglik0, int df0, double loglik1, int df1, int n) {
  const mefit::ComparisonResult cmp =
      mefit::lr_test(loglik0, df0, loglik1, df1);
  std::cout << cell("", 3) << cell("Df", 4) << cell("AIC", 10)
            << (n > 0 ? cell("BIC", 10) : "") << cell("logLik", 10)
            << cell("Chisq", 8) << cell("Chi Df", 7) << cell("Pr(>Chisq)", 11)
            << "\n";
  std::cout << cell("1", 3) << cell(std::to_string(df0), 4)
            << cell(fmt("%.1f", mefit::aic(loglik0, df0)), 10)
            << (n > 0 ? cell(fmt("%.2f", mefit::bic(loglik0, df0, n)), 10)
                      : "")
            << cell(fmt("%.2f", loglik0), 10) << "\n";
  std::cout << cell("2", 3) << cell(std::to_string(df1), 4)
            << cell(fmt("%.1f", mefit::aic(loglik1, df1)), 10)
            << (n > 0 ? cell(fmt("%.2f", mefit::bic(loglik1, df1, n)), 10)
                      : "")
            << cell(fmt("%.2f", loglik1), 10)
            << cell(fmt("%.4f", cmp.statistic), 8)
            << cell(std::to_string(cmp.df_num), 7)
            << cell(fmt("%.4f", cmp.p_value), 11) << "\n";
  if (cmp.clamped) {
    std::cout << "Note: a slightly negative statistic was clamped to 0.\n";
  }
}

void cmd_simulate(int x_levels, int y_levels, int reps,
                  const std::vector<double>& beta, double sd,
                  std::uint64_t seed, const std::string& out_path) {
  mefit::FactorialSpec spec;
  spec.x_levels = x_levels;
  spec.y_levels = y_levels;
  spec.repetitions = reps;
  spec.noise_sd = sd;
  spec.seed = seed;
  if (static_cast<int>(beta.size()) != x_levels * y_levels) {
    throw mefit::Error("simulate: --beta needs x-levels * y-levels values");
  }
  // --beta is column-major: the first x_levels values fill column 1.
  spec.beta.resize(x_levels, y_levels);
  for (int j = 0; j < y_levels; ++j) {
    for (int i = 0; i < x_levels; ++i) {
      spec.beta(i, j) = beta[static_cast<std::size_t>(j * x_levels + i)];
    }
  }

  const mefit::Dataset ds = mefit::generate(spec);
  if (out_path.empty() || out_path == "-") {
    mefit::write_csv(ds, std::cout);
  } else {
    mefit::write_csv(ds, out_path);
    std::cout << "Wrote " << ds.n_rows() << " rows to " << out_path << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model-formula compiler and linear-model inference tool"};
  app.require_subcommand(1);

  std::string csv, formula, reduced, full;
  std::string contrasts = "sum";
  std::string response, effect, across;
  bool json = false;

  CLI::App* matrix = app.add_subcommand(
      "matrix", "Dump a formula's design matrix as CSV");
  matrix->add_option("csv", csv, "Input CSV file")->required();
  matrix->add_option("--formula", formula, "Model formula")->required();
  matrix->add_option("--contrasts", contrasts, "Factor coding: sum or helmert");

  CLI::App* fit = app.add_subcommand("fit", "Ordinary-least-squares fit");
  fit->add_option("csv", csv, "Input CSV file")->required();
  fit->add_option("--formula", formula, "Model formula")->required();
  fit->add_option("--contrasts", contrasts, "Factor coding: sum or helmert");
  fit->add_flag("--json", json, "Machine-readable output");

  CLI::App* anova =
      app.add_subcommand("anova", "Sequential (Type-I) ANOVA table");
  anova->add_option("csv", csv, "Input CSV file")->required();
  anova->add_option("--formula", formula, "Model formula")->required();
  anova->add_option("--contrasts", contrasts, "Factor coding: sum or helmert");

  CLI::App* compare =
      app.add_subcommand("compare", "Nested-model F comparison");
  compare->add_option("csv", csv, "Input CSV file")->required();
  compare->add_option("--reduced", reduced, "Reduced-model formula")
      ->required();
  compare->add_option("--full", full, "Full-model formula")->required();
  compare->add_option("--contrasts", contrasts,
                      "Factor coding: sum or helmert");

  CLI::App* main_effect = app.add_subcommand(
      "test-main-effect",
      "Test a main effect in the presence of its interaction");
  main_effect->add_option("csv", csv, "Input CSV file")->required();
  main_effect->add_option("--response", response, "Response column")
      ->required();
  main_effect->add_option("--effect", effect, "Predictor under test")
      ->required();
  main_effect->add_option("--across", across, "Interacting predictor")
      ->required();
  main_effect->add_option("--contrasts", contrasts,
                          "Factor coding: sum or helmert");

  double loglik0 = 0.0, loglik1 = 0.0;
  int df0 = 0, df1 = 0, lrt_n = 0;
  CLI::App* lrt = app.add_subcommand(
      "lrt", "Likelihood-ratio test from external log-likelihoods");
  lrt->add_option("--loglik0", loglik0, "Null-model log-likelihood")
      ->required();
  lrt->add_option("--df0", df0, "Null-model parameter count")->required();
  lrt->add_option("--loglik1", loglik1, "Alternative log-likelihood")
      ->required();
  lrt->add_option("--df1", df1, "Alternative parameter count")->required();
  lrt->add_option("--n", lrt_n, "Observation count (enables BIC)");

  int x_levels = 2, y_levels = 2, reps = 1;
  std::vector<double> beta;
  double sd = 0.0;
  std::uint64_t seed = 0;
  std::string out_path;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Generate factorial data");
  simulate->add_option("--x-levels", x_levels, "Levels of X")->required();
  simulate->add_option("--y-levels", y_levels, "Levels of Y")->required();
  simulate->add_option("--reps", reps, "Repetitions per cell")->required();
  simulate
      ->add_option("--beta", beta,
                   "Cell means, column-major (x-levels * y-levels values)")
      ->required()
      ->delimiter(',');
  simulate->add_option("--sd", sd, "Noise standard deviation");
  simulate->add_option("--seed", seed, "Random seed");
  simulate->add_option("--out", out_path, "Output CSV path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*matrix) cmd_matrix(csv, formula, contrasts);
    if (*fit) cmd_fit(csv, formula, contrasts, json);
    if (*anova) cmd_anova(csv, formula, contrasts);
    if (*compare) cmd_compare(csv, reduced, full, contrasts);
    if (*main_effect) {
      cmd_test_main_effect(csv, response, effect, across, contrasts);
    }
    if (*lrt) cmd_lrt(loglik0, df0, loglik1, df1, lrt_n);
    if (*simulate) {
      cmd_simulate(x_levels, y_levels, reps, beta, sd, seed, out_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
