#include "peakcut/harness/latency.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <random>
#include <string>

#include "harness/csv.hpp"

namespace peakcut::harness {

LatencyMatrix parse_latency(std::istream& in) {
  LatencyMatrix matrix;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = csv::trim(line);
    if (row.empty()) continue;
    std::vector<double> values;
    for (std::string_view cell : csv::split(row)) {
      const double ms = csv::parse_double(cell, line_no);
      if (!std::isfinite(ms)) throw ParseError(line_no, "latency must be finite");
      if (!(ms > 0.0)) {
        throw NonPositiveLatency("line " + std::to_string(line_no) +
                                 ": latency must be > 0 ms");
      }
      values.push_back(ms);
    }
    if (!matrix.empty() && values.size() != matrix.front().size()) {
      throw ParseError(line_no, "expected " + std::to_string(matrix.front().size()) +
                                    " columns, found " + std::to_string(values.size()));
    }
    matrix.push_back(std::move(values));
  }
  if (matrix.empty()) throw ParseError(line_no, "latency file has no rows");
  return matrix;
}

LatencyMatrix load_latency(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open latency file " + path.string());
  return parse_latency(in);
}

void write_latency(std::ostream& out, const LatencyMatrix& latency) {
  for (const auto& row : latency) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ',';
      out << csv::format(row[j]);
    }
    out << '\n';
  }
}

LatencyMatrix synth_latency(const SynthLatencySpec& spec) {
  if (spec.clients < 1 || spec.dc_positions.empty()) {
    throw DomainError("synthetic latency needs clients and datacenters");
  }
  if (!(spec.base_min_ms > 0.0) || !(spec.base_max_ms >= spec.base_min_ms)) {
    throw DomainError("need 0 < base_min_ms <= base_max_ms");
  }
  if (!(spec.geo_ms >= 0.0) || !(spec.spread >= 0.0) || !(spec.spread <= 1.0)) {
    throw DomainError("need geo_ms >= 0 and spread in [0, 1]");
  }
  for (double p : spec.dc_positions) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("dc positions must lie in [0, 1]");
  }
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  LatencyMatrix matrix(spec.clients, std::vector<double>(spec.dc_positions.size()));
  for (std::size_t i = 0; i < spec.clients; ++i) {
    const double x = 0.5 + spec.spread * (unit(rng) - 0.5);
    const double base =
        spec.base_min_ms + spec.spread * unit(rng) * (spec.base_max_ms - spec.base_min_ms);
    for (std::size_t j = 0; j < spec.dc_positions.size(); ++j) {
      matrix[i][j] = base + spec.geo_ms * std::abs(x - spec.dc_positions[j]);
    }
  }
  return matrix;
}

}  // namespace peakcut::harness
