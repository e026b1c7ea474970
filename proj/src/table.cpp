#include "table.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "error.hpp"
#include "text.hpp"

namespace mif {

void DataTable::add_column(Column col) {
  if (!is_identifier(col.name))
    throw DataError("invalid column name '" + col.name + "'");
  if (has_column(col.name))
    throw DataError("duplicate column name '" + col.name + "'");
  if (col.values.size() != col.present.size())
    throw DataError("column '" + col.name + "': value/mask length mismatch");
  if (!columns_.empty() && col.size() != n_rows_)
    throw DataError("column '" + col.name + "' has " + std::to_string(col.size()) +
                    " rows, table has " + std::to_string(n_rows_));
  n_rows_ = col.size();
  columns_.push_back(std::move(col));
}

void DataTable::add_column(std::string name, std::vector<double> values,
                           std::vector<std::uint8_t> present) {
  add_column(Column{std::move(name), std::move(values), std::move(present)});
}

void DataTable::add_column(std::string name, std::vector<double> values) {
  std::vector<std::uint8_t> present(values.size(), 1);
  add_column(Column{std::move(name), std::move(values), std::move(present)});
}

bool DataTable::has_column(std::string_view name) const {
  for (const auto& c : columns_)
    if (c.name == name) return true;
  return false;
}

const Column& DataTable::column(std::string_view name) const {
  for (const auto& c : columns_)
    if (c.name == name) return c;
  throw DataError("unknown column '" + std::string(name) + "'");
}

std::size_t DataTable::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i].name == name) return i;
  throw DataError("unknown column '" + std::string(name) + "'");
}

namespace {

// Strips one trailing CR so CRLF input still parses; the writer emits LF only.
std::string_view chomp(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

DataTable read_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw DataError("'" + path + "': empty file");
  auto header = split_tabs(chomp(line));

  std::unordered_set<std::string_view> seen;
  std::vector<Column> cols;
  cols.reserve(header.size());
  for (auto name : header) {
    if (!is_identifier(name))
      throw DataError("'" + path + "': invalid column name '" + std::string(name) + "'");
    if (!seen.insert(name).second)
      throw DataError("'" + path + "': duplicate column name '" + std::string(name) + "'");
    cols.push_back(Column{std::string(name), {}, {}});
  }

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    auto cells = split_tabs(chomp(line));
    if (cells.size() != cols.size())
      throw DataError("'" + path + "' line " + std::to_string(lineno) + ": expected " +
                      std::to_string(cols.size()) + " cells, got " +
                      std::to_string(cells.size()));
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (cells[j].empty()) {
        cols[j].values.push_back(0.0);
        cols[j].present.push_back(0);
      } else {
        auto v = parse_double(cells[j]);
        if (!v)
          throw DataError("'" + path + "' line " + std::to_string(lineno) +
                          ", column '" + cols[j].name + "': bad numeral '" +
                          std::string(cells[j]) + "'");
        cols[j].values.push_back(*v);
        cols[j].present.push_back(1);
      }
    }
  }

  DataTable table;
  for (auto& c : cols) table.add_column(std::move(c));
  return table;
}

void write_table(const DataTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");

  for (std::size_t j = 0; j < table.n_cols(); ++j) {
    if (j) out << '\t';
    out << table.column_at(j).name;
  }
  out << '\n';
  for (std::size_t i = 0; i < table.n_rows(); ++i) {
    for (std::size_t j = 0; j < table.n_cols(); ++j) {
      if (j) out << '\t';
      const Column& c = table.column_at(j);
      if (c.observed(i)) out << format_double(c.value(i));
    }
    out << '\n';
  }
  if (!out) throw DataError("write failed for '" + path + "'");
}

MissingnessSummary missingness(const DataTable& table, std::string_view col) {
  const Column& c = table.column(col);
  MissingnessSummary s;
  s.n_total = c.size();
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!c.observed(i)) ++s.n_missing;
  s.fraction_missing =
      s.n_total == 0 ? 0.0 : static_cast<double>(s.n_missing) / static_cast<double>(s.n_total);
  return s;
}

}  // namespace mif
