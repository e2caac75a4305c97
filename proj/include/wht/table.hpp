#pragma once

// Column-oriented result tables and their CSV form.

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace wht {

/// Empty cells print as NA.
using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Throws DomainError if the row width differs from the header.
  void add_row(std::vector<Cell> row);
  /// Header plus rows, comma separated, '\n' line endings.
  void write_csv(std::ostream& os) const;
  std::string to_csv() const;
};

/// Shortest-round-trip is not enough for diffing across tools, so doubles
/// always print with 17 significant digits; NaN prints as NA.
std::string format_double(double x);

}  // namespace wht
