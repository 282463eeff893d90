#pragma once

// Rectangular CSV result with a units header line and a provenance footer,
// both written as '#' comment lines. Numbers use 6 significant digits so
// identical inputs give byte-identical files.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sqzkit/errors.hpp"

namespace sqzkit::io {

inline constexpr const char* kToolkitVersion = "sqzkit 0.1.0";

struct Column {
  std::string name;
  std::string unit;  // "1" for dimensionless, "" for labels
};

using Cell = std::variant<double, long long, std::string>;

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string format_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

struct Provenance {
  std::string command;
  std::string scenario_digest;
};

class ResultTable {
 public:
  explicit ResultTable(std::vector<Column> columns) : columns_(std::move(columns)) {}

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) {
      throw Error("ResultTable: row has " + std::to_string(row.size()) + " cells, expected " +
                  std::to_string(columns_.size()));
    }
    rows_.push_back(std::move(row));
  }

  // Prepends a column holding the same value in every existing row.
  void prepend_column(Column column, const Cell& value) {
    columns_.insert(columns_.begin(), std::move(column));
    for (auto& r : rows_) r.insert(r.begin(), value);
  }

  void append_rows(const ResultTable& other) {
    if (other.columns_.size() != columns_.size()) throw Error("ResultTable: column mismatch");
    for (const auto& r : other.rows_) rows_.push_back(r);
  }

  const std::vector<Column>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }

  void write_csv(std::ostream& out, const Provenance& prov) const {
    out << "# units: ";
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      if (i) out << ',';
      out << columns_[i].name << " [" << columns_[i].unit << ']';
    }
    out << '\n';
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      if (i) out << ',';
      out << columns_[i].name;
    }
    out << '\n';
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) out << ',';
        out << format_cell(r[i]);
      }
      out << '\n';
    }
    out << "# command: " << prov.command << '\n';
    out << "# scenario: " << prov.scenario_digest << '\n';
    out << "# version: " << kToolkitVersion << '\n';
  }

 private:
  std::vector<Column> columns_;
  std::vector<std::vector<Cell>> rows_;
};

// 64-bit FNV-1a, used to fingerprint input files in the provenance footer.
inline std::string digest(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sqzkit::io
