#include "cubespline/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include "cubespline/errors.hpp"

namespace cubespline {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string field;
  while (in >> field) {
    out.push_back(field);
  }
  return out;
}

bool skippable(const std::vector<std::string>& fields) {
  return fields.empty() || fields.front().front() == '#';
}

double parse_number(const std::string& text, int lineno) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && *first == '+') {
    ++first;
  }
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("not a number: '" + text + "'", lineno);
  }
  return v;
}

std::int64_t parse_integer(const std::string& text, int lineno) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("not an integer: '" + text + "'", lineno);
  }
  return v;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open '" + path + "' for reading", 0);
  }
  return in;
}

}  // namespace

ControlCurve CurveFile::curve() const { return ControlCurve(knots, values); }

CurveFile parse_curve(std::istream& in) {
  CurveFile out;
  std::vector<double> second;
  std::size_t width = 0;
  int prev_line = 0;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto fields = split_fields(line);
    if (skippable(fields)) {
      continue;
    }
    if (fields.size() != 2 && fields.size() != 3) {
      throw ParseError("expected 2 or 3 columns, found " + std::to_string(fields.size()), lineno);
    }
    if (width == 0) {
      width = fields.size();
    } else if (fields.size() != width) {
      throw ParseError("expected " + std::to_string(width) + " columns, found " +
                           std::to_string(fields.size()),
                       lineno);
    }
    const double x = parse_number(fields[0], lineno);
    const double y = parse_number(fields[1], lineno);
    if (!out.knots.empty() && !(x > out.knots.back())) {
      throw OrderingError("line " + std::to_string(lineno) + ": knot " + fields[0] +
                          " does not exceed the knot on line " + std::to_string(prev_line));
    }
    out.knot_text.push_back(fields[0]);
    out.value_text.push_back(fields[1]);
    out.knots.push_back(x);
    out.values.push_back(y);
    if (width == 3) {
      second.push_back(parse_number(fields[2], lineno));
    }
    prev_line = lineno;
  }
  if (width == 3) {
    out.second = std::move(second);
  }
  return out;
}

CurveFile read_curve_file(const std::string& path) {
  auto in = open_input(path);
  return parse_curve(in);
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

BenchTable parse_bench(std::istream& in) {
  BenchTable table;
  std::string line;
  int lineno = 0;
  std::map<std::string, std::size_t> index;
  while (std::getline(in, line)) {
    ++lineno;
    const auto fields = split_fields(line);
    if (fields.empty()) {
      continue;
    }
    if (table.columns.empty()) {
      table.columns = fields;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        index[fields[i]] = i;
      }
      std::string missing;
      for (const std::string& want : {std::string("n"), std::string("noop"), std::string("order")}) {
        if (!index.count(want)) {
          missing += (missing.empty() ? "" : ", ") + want;
        }
      }
      for (const auto& v : variant_registry()) {
        if (v.id != kNoopId && !index.count(v.label)) {
          missing += (missing.empty() ? "" : ", ") + v.label;
        }
      }
      if (!missing.empty()) {
        throw ParseError("benchmark header is missing column(s): " + missing, lineno);
      }
      continue;
    }
    if (fields.size() != table.columns.size()) {
      throw ParseError("expected " + std::to_string(table.columns.size()) + " columns, found " +
                           std::to_string(fields.size()),
                       lineno);
    }
    BenchRecord rec;
    rec.n = parse_integer(fields[index["n"]], lineno);
    rec.noop_ns = parse_integer(fields[index["noop"]], lineno);
    rec.order = static_cast<std::uint64_t>(parse_integer(fields[index["order"]], lineno));
    rec.alg_ns.assign(kNoopId - 1, std::nullopt);
    for (const auto& v : variant_registry()) {
      if (v.id == kNoopId) {
        continue;
      }
      const std::string& text = fields[index[v.label]];
      if (text != "NA") {
        rec.alg_ns[static_cast<std::size_t>(v.id - 1)] = parse_integer(text, lineno);
      }
    }
    table.rows.push_back(rec);
  }
  if (table.columns.empty()) {
    throw ParseError("benchmark file is empty", lineno);
  }
  return table;
}

BenchTable read_bench_file(const std::string& path) {
  auto in = open_input(path);
  return parse_bench(in);
}

}  // namespace cubespline
