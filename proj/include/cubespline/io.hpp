#pragma once

// Whitespace-separated text files for curves, second derivatives and
// benchmark output.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cubespline/bench.hpp"
#include "cubespline/spline.hpp"

namespace cubespline {

/// Two columns (x, y) or three (x, y, y''). Lines starting with '#' and blank
/// lines are skipped. The decimal text is kept for extended-precision use.
struct CurveFile {
  std::vector<std::string> knot_text;
  std::vector<std::string> value_text;
  std::vector<double> knots;
  std::vector<double> values;
  std::optional<std::vector<double>> second;

  ControlCurve curve() const;
};

CurveFile parse_curve(std::istream& in);
CurveFile read_curve_file(const std::string& path);

/// Shortest text that reads back to the same double.
std::string format_double(double v);

/// Benchmark TSV as written by run_benchmark. Missing timings stay empty.
struct BenchTable {
  std::vector<std::string> columns;
  std::vector<BenchRecord> rows;
};

BenchTable parse_bench(std::istream& in);
BenchTable read_bench_file(const std::string& path);

}  // namespace cubespline
