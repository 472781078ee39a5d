#include "mefit/design.hpp"

#include <Eigen/QR>
#include <algorithm>

namespace mefit {

namespace {

// Column block contributed by one variable inside a term.
struct VariableBlock {
  std::vector<Eigen::VectorXd> columns;
  std::vector<std::string> labels;
};

VariableBlock dummy_block(const std::string& name, const FactorColumn& f) {
  const auto n = static_cast<Eigen::Index>(f.codes.size());
  VariableBlock block;
  for (int level = 0; level < f.level_count(); ++level) {
    Eigen::VectorXd col = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (f.codes[static_cast<std::size_t>(i)] == level) col[i] = 1.0;
    }
    block.columns.push_back(std::move(col));
    block.labels.push_back(name + f.levels[static_cast<std::size_t>(level)]);
  }
  return block;
}

VariableBlock contrast_block(const std::string& name, const FactorColumn& f,
                             ContrastScheme scheme) {
  const auto n = static_cast<Eigen::Index>(f.codes.size());
  ContrastMatrix cm = contrast_matrix(scheme, f.level_count());
  VariableBlock block;
  for (int j = 0; j < cm.levels - 1; ++j) {
    Eigen::VectorXd col(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      col[i] = cm.entries(f.codes[static_cast<std::size_t>(i)], j);
    }
    block.columns.push_back(std::move(col));
    // Treatment columns are named after the level they indicate, true
    // contrasts by column number.
    block.labels.push_back(scheme == ContrastScheme::treatment
                               ? name + f.levels[static_cast<std::size_t>(j + 1)]
                               : name + cm.suffixes[static_cast<std::size_t>(j)]);
  }
  return block;
}

}  // namespace

DesignMatrix build_design(const Formula& f, const Dataset& ds,
                          ContrastScheme scheme) {
  if (ds.n_rows() == 0) {
    throw Error("cannot build a design matrix from a zero-row dataset");
  }
  for (const Term& t : f.terms) {
    for (const auto& v : t.variables()) {
      if (!ds.has_column(v)) {
        throw Error("formula variable '" + v + "' is not in the dataset");
      }
      if (is_factor(ds.column(v)) && ds.factor(v).level_count() < 2) {
        throw Error("factor '" + v + "' has fewer than 2 levels");
      }
    }
  }

  const Eigen::Index n = ds.n_rows();
  std::vector<Eigen::VectorXd> columns;
  DesignMatrix dm;

  if (f.intercept) {
    columns.push_back(Eigen::VectorXd::Ones(n));
    dm.labels.push_back("(Intercept)");
    dm.assign.push_back(0);
  }

  // Empty margins resolve against the intercept; without one, the first
  // all-dummy factor block spans the constant and takes over that role.
  bool empty_margin_available = f.intercept;
  std::vector<Term> earlier;

  for (std::size_t ti = 0; ti < f.terms.size(); ++ti) {
    const Term& term = f.terms[ti];
    std::vector<VariableBlock> blocks;
    bool all_factors = true;
    bool all_dummy = true;

    for (const auto& v : term.variables()) {
      const Column& col = ds.column(v);
      if (is_numeric(col)) {
        all_factors = false;
        VariableBlock block;
        block.columns.push_back(std::get<NumericColumn>(col).values);
        block.labels.push_back(v);
        blocks.push_back(std::move(block));
        continue;
      }
      const FactorColumn& fac = std::get<FactorColumn>(col);
      Term margin = term.without(v);
      bool margin_present =
          margin.order() == 0
              ? empty_margin_available
              : std::find(earlier.begin(), earlier.end(), margin) !=
                    earlier.end();
      if (margin_present) {
        all_dummy = false;
        blocks.push_back(contrast_block(v, fac, scheme));
      } else {
        blocks.push_back(dummy_block(v, fac));
      }
    }

    // All products of one column per variable, first variable fastest.
    std::size_t combos = 1;
    for (const auto& b : blocks) combos *= b.columns.size();
    for (std::size_t c = 0; c < combos; ++c) {
      Eigen::VectorXd col = Eigen::VectorXd::Ones(n);
      std::string label;
      std::size_t rest = c;
      for (const auto& b : blocks) {
        std::size_t pick = rest % b.columns.size();
        rest /= b.columns.size();
        col = col.cwiseProduct(b.columns[pick]);
        if (!label.empty()) label += ':';
        label += b.labels[pick];
      }
      // Adding 0.0 turns the negative zeros that -1 * 0 products leave
      // behind into plain zeros.
      if (blocks.size() > 1) col.array() += 0.0;
      columns.push_back(std::move(col));
      dm.labels.push_back(label);
      dm.assign.push_back(static_cast<int>(ti) + 1);
    }

    if (!blocks.empty() && all_factors && all_dummy) {
      empty_margin_available = true;
    }
    earlier.push_back(term);
  }

  dm.values.resize(n, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    dm.values.col(static_cast<Eigen::Index>(c)) = columns[c];
  }
  return dm;
}

namespace {

// Residual norms after projecting each column of `cols` onto span(basis).
bool columns_in_span(const Eigen::MatrixXd& cols, const Eigen::MatrixXd& basis,
                     double tol) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis);
  const auto rank = qr.rank();
  Eigen::MatrixXd q = qr.householderQ() *
                      Eigen::MatrixXd::Identity(basis.rows(), rank);
  for (Eigen::Index j = 0; j < cols.cols(); ++j) {
    Eigen::VectorXd c = cols.col(j);
    Eigen::VectorXd residual = c - q * (q.transpose() * c);
    if (residual.norm() > tol * std::max(c.norm(), 1.0)) return false;
  }
  return true;
}

}  // namespace

bool column_span_equal(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                       double tol) {
  if (a.rows() != b.rows()) {
    throw Error("column_span_equal: row counts differ");
  }
  return columns_in_span(a, b, tol) && columns_in_span(b, a, tol);
}

}  // namespace mefit
