#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mif {

// One named numeric column. Missing cells are tracked by `present`; the
// value slot under a missing cell is unspecified and must not be read.
struct Column {
  std::string name;
  std::vector<double> values;
  std::vector<std::uint8_t> present;

  std::size_t size() const { return values.size(); }
  bool observed(std::size_t row) const { return present[row] != 0; }
  double value(std::size_t row) const { return values[row]; }
  std::optional<double> get(std::size_t row) const {
    if (!present[row]) return std::nullopt;
    return values[row];
  }
};

struct MissingnessSummary {
  std::size_t n_total = 0;
  std::size_t n_missing = 0;
  double fraction_missing = 0.0;
  bool systematically_missing() const { return n_total > 0 && n_missing == n_total; }
};

// Columnar numeric data with explicit missingness. Immutable in spirit:
// columns are appended during construction, never mutated afterwards.
class DataTable {
 public:
  DataTable() = default;

  // Throws DataError on duplicate/invalid names or length mismatch.
  void add_column(Column col);
  void add_column(std::string name, std::vector<double> values,
                  std::vector<std::uint8_t> present);
  // Fully observed column.
  void add_column(std::string name, std::vector<double> values);

  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_cols() const { return columns_.size(); }

  bool has_column(std::string_view name) const;
  const Column& column(std::string_view name) const;  // throws DataError if unknown
  const Column& column_at(std::size_t i) const { return columns_[i]; }
  std::size_t column_index(std::string_view name) const;

  const std::vector<Column>& columns() const { return columns_; }

 private:
  std::vector<Column> columns_;
  std::size_t n_rows_ = 0;
};

DataTable read_table(const std::string& path);
void write_table(const DataTable& table, const std::string& path);
MissingnessSummary missingness(const DataTable& table, std::string_view col);

}  // namespace mif
