#pragma once

// Published four-decimal values of (eta_n, h_n, A_n) for n = 1..10.

#include <optional>
#include <vector>

namespace sitnikov::reference {

struct Table1Row {
  int n = 0;
  double eta = 0.0;
  double h = 0.0;
  double A = 0.0;
};

/// Absolute agreement required against the four-decimal values.
inline constexpr double kTable1Tolerance = 5e-4;

const std::vector<Table1Row>& table1();
std::optional<Table1Row> table1_row(int n);

}  // namespace sitnikov::reference
