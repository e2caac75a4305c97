#include "wht/table.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "wht/errors.hpp"

namespace wht {

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

struct CellPrinter {
  std::string operator()(std::monostate) const { return "NA"; }
  std::string operator()(double x) const { return format_double(x); }
  std::string operator()(std::int64_t x) const { return std::to_string(x); }
  std::string operator()(const std::string& s) const { return quote(s); }
};

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "NA";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw DomainError("table row has " + std::to_string(row.size()) + " cells, expected " +
                      std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

void Table::write_csv(std::ostream& os) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) os << ',';
    os << quote(columns[i]);
  }
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << std::visit(CellPrinter{}, row[i]);
    }
    os << '\n';
  }
}

std::string Table::to_csv() const {
  std::ostringstream os;
  write_csv(os);
  return os.str();
}

}  // namespace wht
