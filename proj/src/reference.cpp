#include "sitnikov/reference.hpp"

#include <sstream>
#include <string>

#include "sitnikov/errors.hpp"
#include "sitnikov/table1_data.hpp"

namespace sitnikov::reference {
namespace {

std::vector<Table1Row> parse(const char* csv) {
  std::istringstream in(csv);
  std::string line;
  std::vector<Table1Row> rows;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::istringstream fields(line);
    Table1Row row;
    char c1 = 0, c2 = 0, c3 = 0;
    if (!(fields >> row.n >> c1 >> row.eta >> c2 >> row.h >> c3 >> row.A) || c1 != ',' || c2 != ',' || c3 != ',')
      throw InvalidConfig("malformed reference row: " + line);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

const std::vector<Table1Row>& table1() {
  static const std::vector<Table1Row> rows = parse(detail::kTable1Csv);
  return rows;
}

std::optional<Table1Row> table1_row(int n) {
  for (const auto& row : table1())
    if (row.n == n) return row;
  return std::nullopt;
}

}  // namespace sitnikov::reference
