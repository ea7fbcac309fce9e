// Row tables with identical CSV and JSON emission.

#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace lsieve::harness {

using Cell = std::variant<std::string, double, std::int64_t, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Appends a row; its length must match the columns.
  void add(std::vector<Cell> row);
  /// Index of a column; throws std::out_of_range when absent.
  std::size_t column(const std::string& name) const;
};

/// Header line then one line per row; doubles as %.17g.
void write_csv(std::ostream& os, const Table& t);
/// Array of objects keyed in column order.
void write_json(std::ostream& os, const Table& t);
std::string format_cell(const Cell& c);

}  // namespace lsieve::harness
