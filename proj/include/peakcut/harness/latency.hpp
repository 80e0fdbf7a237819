#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "peakcut/error.hpp"

namespace peakcut::harness {

class NonPositiveLatency : public Error {
 public:
  using Error::Error;
};

// Round-trip latency in ms, [client][datacenter].
using LatencyMatrix = std::vector<std::vector<double>>;

// Header-less CSV, one row per client, one column per datacenter.
LatencyMatrix parse_latency(std::istream& in);
LatencyMatrix load_latency(const std::filesystem::path& path);
void write_latency(std::ostream& out, const LatencyMatrix& latency);

// Clients and datacenters sit on a unit line. Client i has position
// x_i = 0.5 + spread * (U - 0.5) and access latency
// base_i = base_min + spread * U' * (base_max - base_min); then
// L_ij = base_i + geo_ms * |x_i - p_j|. spread = 0 puts every client at the
// same point with the same base, so all rows coincide.
struct SynthLatencySpec {
  std::size_t clients = 100;
  std::vector<double> dc_positions;   // p_j in [0, 1]
  double base_min_ms = 10.0;
  double base_max_ms = 120.0;
  double geo_ms = 60.0;
  double spread = 1.0;
  std::uint64_t seed = 1;
};

LatencyMatrix synth_latency(const SynthLatencySpec& spec);

}  // namespace peakcut::harness
