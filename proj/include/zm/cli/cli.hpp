#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace zm::cli {

/// One recomputed published value.
struct TableRow {
  std::string table;
  std::string quantity;
  double computed = 0.0;
  /// The published value as quoted, e.g. "0.2417..." or "< 1e-5" or "1/30".
  std::string quoted;
  double reference = 0.0;
  double tolerance = 0.0;
  /// computed must lie below reference instead of within tolerance of it.
  bool upper_bound = false;
  bool ok = false;
};

/// which: example_1_4, zolotarev_M, subbotin, constants or all.
std::vector<TableRow> paper_table(const std::string& which);

/// Tolerance implied by a truncated decimal: 1.5 units in its last digit.
double quoted_tolerance(const std::string& digits);

/// Entry point of the zm tool. Exit codes: 0 success, 1 reproduction breach or
/// internal failure, 2 usage or parse error, 3 metric or bound precondition failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zm::cli
