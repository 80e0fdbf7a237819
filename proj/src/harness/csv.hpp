#pragma once

// Minimal CSV helpers shared by the trace and latency readers.

#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "peakcut/error.hpp"

namespace peakcut::harness::csv {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string_view> split(std::string_view row) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = row.find(',', start);
    cells.push_back(trim(row.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

inline long long parse_int(std::string_view cell, std::size_t line) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
    throw ParseError(line, "not an integer: '" + std::string(cell) + "'");
  }
  return value;
}

inline double parse_double(std::string_view cell, std::size_t line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
    throw ParseError(line, "not a number: '" + std::string(cell) + "'");
  }
  return value;
}

// Nine significant digits, the precision of every float the tools write.
inline std::string format(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

}  // namespace peakcut::harness::csv
