#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mogp/errors.hpp"

namespace mogp {

// Column-major table of real-valued inputs; rows are examples, columns are
// features.  Column storage keeps tree evaluation (one feature column at a
// time) cache-friendly.
class FeatureTable {
 public:
  FeatureTable() = default;
  FeatureTable(std::size_t rows, std::size_t cols)
      : rows_(rows), columns_(cols, std::vector<double>(rows, 0.0)) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return columns_.size(); }

  double get(std::size_t row, std::size_t col) const { return columns_[col][row]; }
  void set(std::size_t row, std::size_t col, double v) { columns_[col][row] = v; }

  const std::vector<double>& column(std::size_t col) const { return columns_[col]; }

  // Appends one row; the first row fixes the width.
  void push_row(std::span<const double> row) {
    if (columns_.empty()) {
      columns_.resize(row.size());
    } else if (row.size() != columns_.size()) {
      throw ContractError("FeatureTable::push_row: row width mismatch");
    }
    for (std::size_t c = 0; c < row.size(); ++c) columns_[c].push_back(row[c]);
    ++rows_;
  }

  bool operator==(const FeatureTable&) const = default;

 private:
  std::size_t rows_ = 0;
  std::vector<std::vector<double>> columns_;
};

}  // namespace mogp
