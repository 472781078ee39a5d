#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mefit/error.hpp"

namespace mefit {

struct NumericColumn {
  Eigen::VectorXd values;
};

/// A categorical column: an ordered table of distinct level labels plus
/// one 0-based level index per row.
struct FactorColumn {
  std::vector<std::string> levels;
  std::vector<int> codes;

  int level_count() const { return static_cast<int>(levels.size()); }
};

using Column = std::variant<NumericColumn, FactorColumn>;

inline bool is_factor(const Column& c) {
  return std::holds_alternative<FactorColumn>(c);
}
inline bool is_numeric(const Column& c) {
  return std::holds_alternative<NumericColumn>(c);
}

/// Immutable-after-construction table of equal-length named columns.
/// Column order is preserved (it is the CSV column order).
class Dataset {
 public:
  Dataset() = default;

  /// Appends a numeric column; the first column fixes the row count.
  void add_numeric(const std::string& name, Eigen::VectorXd values);
  /// Appends a factor column given an explicit level table and codes.
  /// Requires at least two levels and in-range codes.
  void add_factor(const std::string& name, std::vector<std::string> levels,
                  std::vector<int> codes);
  /// Appends a factor column from raw labels; levels are the distinct
  /// labels sorted lexicographically.
  void add_factor_from_labels(const std::string& name,
                              const std::vector<std::string>& labels);

  Eigen::Index n_rows() const { return n_rows_; }
  std::size_t n_columns() const { return columns_.size(); }
  bool has_column(const std::string& name) const;
  const Column& column(const std::string& name) const;
  const std::vector<std::string>& column_names() const { return names_; }

  const NumericColumn& numeric(const std::string& name) const;
  const FactorColumn& factor(const std::string& name) const;

 private:
  std::vector<std::string> names_;
  std::vector<Column> columns_;
  std::map<std::string, std::size_t> index_;
  Eigen::Index n_rows_ = 0;
  bool have_rows_ = false;

  void check_new_column(const std::string& name, Eigen::Index rows);
};

enum class ColumnType { numeric, factor };
using TypeHints = std::map<std::string, ColumnType>;

/// Reads an RFC-4180-style CSV file (UTF-8, `\n` or `\r\n` line ends,
/// double-quote escaping).  The first row is the header.  Unhinted
/// columns are numeric iff every cell parses as a real number, otherwise
/// they become factors with levels sorted lexicographically.  Empty
/// cells and the NA token are rejected with their row/column location.
Dataset read_csv(const std::string& path, const TypeHints& hints = {});
Dataset read_csv(std::istream& in, const TypeHints& hints = {});

/// Writes a Dataset as CSV: `\n` line ends, minimal quoting, numerics
/// formatted with shortest round-trip precision.
void write_csv(const Dataset& ds, const std::string& path);
void write_csv(const Dataset& ds, std::ostream& out);

/// Per-cell means of `response` over the cross of the listed factor
/// columns.  Cells are enumerated with the first factor varying fastest;
/// cells with no data have count 0 and a NaN mean.
struct CellMeans {
  std::vector<std::string> factor_names;
  std::vector<std::vector<std::string>> level_labels;  // per factor
  std::vector<double> means;   // flattened, first factor fastest
  std::vector<int> counts;

  std::size_t cell_count() const { return means.size(); }
  /// Flattened index of a cell given one level index per factor.
  std::size_t cell_index(const std::vector<int>& level_indices) const;
};

CellMeans factor_cell_means(const Dataset& ds, const std::string& response,
                            const std::vector<std::string>& factors);

}  // namespace mefit
