#include "mefit/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

namespace mefit {

void Dataset::check_new_column(const std::string& name, Eigen::Index rows) {
  if (index_.count(name)) {
    throw DataError("duplicate column name '" + name + "'");
  }
  if (have_rows_ && rows != n_rows_) {
    throw DataError("column '" + name + "' has " + std::to_string(rows) +
                    " rows, expected " + std::to_string(n_rows_));
  }
}

void Dataset::add_numeric(const std::string& name, Eigen::VectorXd values) {
  check_new_column(name, values.size());
  n_rows_ = values.size();
  have_rows_ = true;
  index_[name] = columns_.size();
  names_.push_back(name);
  columns_.emplace_back(NumericColumn{std::move(values)});
}

void Dataset::add_factor(const std::string& name,
                         std::vector<std::string> levels,
                         std::vector<int> codes) {
  check_new_column(name, static_cast<Eigen::Index>(codes.size()));
  if (levels.size() < 2) {
    throw DataError("factor column '" + name +
                    "' needs at least two levels, got " +
                    std::to_string(levels.size()));
  }
  std::set<std::string> distinct(levels.begin(), levels.end());
  if (distinct.size() != levels.size()) {
    throw DataError("factor column '" + name + "' has duplicate levels");
  }
  for (int code : codes) {
    if (code < 0 || code >= static_cast<int>(levels.size())) {
      throw DataError("factor column '" + name + "' has out-of-range code " +
                      std::to_string(code));
    }
  }
  n_rows_ = static_cast<Eigen::Index>(codes.size());
  have_rows_ = true;
  index_[name] = columns_.size();
  names_.push_back(name);
  columns_.emplace_back(FactorColumn{std::move(levels), std::move(codes)});
}

void Dataset::add_factor_from_labels(const std::string& name,
                                     const std::vector<std::string>& labels) {
  std::set<std::string> distinct(labels.begin(), labels.end());
  std::vector<std::string> levels(distinct.begin(), distinct.end());
  std::map<std::string, int> to_code;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    to_code[levels[i]] = static_cast<int>(i);
  }
  std::vector<int> codes;
  codes.reserve(labels.size());
  for (const auto& label : labels) codes.push_back(to_code[label]);
  add_factor(name, std::move(levels), std::move(codes));
}

bool Dataset::has_column(const std::string& name) const {
  return index_.count(name) != 0;
}

const Column& Dataset::column(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) {
    throw DataError("unknown column '" + name + "'");
  }
  return columns_[it->second];
}

const NumericColumn& Dataset::numeric(const std::string& name) const {
  const Column& c = column(name);
  if (!is_numeric(c)) {
    throw DataError("column '" + name + "' is not numeric");
  }
  return std::get<NumericColumn>(c);
}

const FactorColumn& Dataset::factor(const std::string& name) const {
  const Column& c = column(name);
  if (!is_factor(c)) {
    throw DataError("column '" + name + "' is not a factor");
  }
  return std::get<FactorColumn>(c);
}

namespace {

// RFC-4180 record reader; handles quoted fields with embedded commas,
// doubled quotes and newlines.  Returns false at end of input.
bool read_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  int c = in.get();
  if (c == EOF) return false;
  std::string field;
  bool in_quotes = false;
  bool any = false;
  while (true) {
    if (c == EOF) {
      fields.push_back(field);
      return true;
    }
    any = true;
    char ch = static_cast<char>(c);
    if (in_quotes) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get();
          field += '"';
        } else {
          in_quotes = false;
        }
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      in_quotes = true;
    } else if (ch == ',') {
      fields.push_back(field);
      field.clear();
    } else if (ch == '\n') {
      fields.push_back(field);
      return true;
    } else if (ch == '\r') {
      if (in.peek() == '\n') in.get();
      fields.push_back(field);
      return true;
    } else {
      field += ch;
    }
    c = in.get();
  }
  (void)any;
}

bool parse_double(const std::string& text, double& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto result = std::from_chars(begin, end, out);
  return result.ec == std::errc() && result.ptr == end;
}

std::string format_double(double v) {
  char buf[32];
  auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

bool needs_quoting(const std::string& field) {
  return field.find_first_of(",\"\r\n") != std::string::npos;
}

std::string quoted(const std::string& field) {
  if (!needs_quoting(field)) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

Dataset read_csv(std::istream& in, const TypeHints& hints) {
  std::vector<std::string> header;
  if (!read_record(in, header) || (header.size() == 1 && header[0].empty())) {
    throw DataError("CSV input has no header row");
  }
  std::set<std::string> seen;
  for (const auto& name : header) {
    if (!seen.insert(name).second) {
      throw DataError("duplicate header name '" + name + "'");
    }
  }

  std::vector<std::vector<std::string>> cells(header.size());
  std::vector<std::string> record;
  std::size_t row = 1;  // header was row 1
  while (read_record(in, record)) {
    ++row;
    if (record.size() == 1 && record[0].empty()) continue;  // trailing blank line
    if (record.size() != header.size()) {
      throw DataError("row " + std::to_string(row) + " has " +
                      std::to_string(record.size()) + " fields, expected " +
                      std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < record.size(); ++c) {
      if (record[c].empty() || record[c] == "NA") {
        throw DataError("missing value in row " + std::to_string(row) +
                        ", column '" + header[c] + "'");
      }
      cells[c].push_back(record[c]);
    }
  }

  Dataset ds;
  for (std::size_t c = 0; c < header.size(); ++c) {
    std::optional<ColumnType> hint;
    if (auto it = hints.find(header[c]); it != hints.end()) hint = it->second;

    bool all_numeric = true;
    std::vector<double> parsed(cells[c].size());
    for (std::size_t r = 0; r < cells[c].size(); ++r) {
      if (!parse_double(cells[c][r], parsed[r])) {
        all_numeric = false;
        if (hint == ColumnType::numeric) {
          throw DataError("column '" + header[c] + "' is hinted numeric but '" +
                          cells[c][r] + "' in row " + std::to_string(r + 2) +
                          " is not a number");
        }
        break;
      }
    }

    bool numeric = hint ? (*hint == ColumnType::numeric) : all_numeric;
    if (numeric) {
      Eigen::VectorXd v(static_cast<Eigen::Index>(parsed.size()));
      for (std::size_t r = 0; r < parsed.size(); ++r) {
        v[static_cast<Eigen::Index>(r)] = parsed[r];
      }
      ds.add_numeric(header[c], std::move(v));
    } else {
      ds.add_factor_from_labels(header[c], cells[c]);
    }
  }
  return ds;
}

Dataset read_csv(const std::string& path, const TypeHints& hints) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open '" + path + "' for reading");
  }
  return read_csv(in, hints);
}

void write_csv(const Dataset& ds, std::ostream& out) {
  const auto& names = ds.column_names();
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (c > 0) out << ',';
    out << quoted(names[c]);
  }
  out << '\n';
  for (Eigen::Index r = 0; r < ds.n_rows(); ++r) {
    for (std::size_t c = 0; c < names.size(); ++c) {
      if (c > 0) out << ',';
      const Column& col = ds.column(names[c]);
      if (is_numeric(col)) {
        out << format_double(std::get<NumericColumn>(col).values[r]);
      } else {
        const auto& f = std::get<FactorColumn>(col);
        out << quoted(f.levels[static_cast<std::size_t>(f.codes[r])]);
      }
    }
    out << '\n';
  }
}

void write_csv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot open '" + path + "' for writing");
  }
  write_csv(ds, out);
}

std::size_t CellMeans::cell_index(const std::vector<int>& level_indices) const {
  std::size_t idx = 0;
  std::size_t stride = 1;
  for (std::size_t f = 0; f < level_labels.size(); ++f) {
    idx += stride * static_cast<std::size_t>(level_indices[f]);
    stride *= level_labels[f].size();
  }
  return idx;
}

CellMeans factor_cell_means(const Dataset& ds, const std::string& response,
                            const std::vector<std::string>& factors) {
  const NumericColumn& y = ds.numeric(response);
  CellMeans out;
  out.factor_names = factors;
  std::size_t cells = 1;
  std::vector<const FactorColumn*> cols;
  for (const auto& name : factors) {
    const FactorColumn& f = ds.factor(name);
    cols.push_back(&f);
    out.level_labels.push_back(f.levels);
    cells *= f.levels.size();
  }
  out.means.assign(cells, 0.0);
  out.counts.assign(cells, 0);

  for (Eigen::Index r = 0; r < ds.n_rows(); ++r) {
    std::size_t idx = 0;
    std::size_t stride = 1;
    for (const FactorColumn* f : cols) {
      idx += stride * static_cast<std::size_t>(f->codes[r]);
      stride *= f->levels.size();
    }
    out.means[idx] += y.values[r];
    out.counts[idx] += 1;
  }
  for (std::size_t i = 0; i < cells; ++i) {
    out.means[i] = out.counts[i] > 0
                       ? out.means[i] / out.counts[i]
                       : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

}  // namespace mefit
