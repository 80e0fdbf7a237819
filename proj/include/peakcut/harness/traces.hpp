#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "peakcut/error.hpp"
#include "peakcut/model.hpp"

namespace peakcut::harness {

// CSV with a header line `slot,requests`. Slots must be contiguous from 0.
DemandTrace parse_trace(std::istream& in, int slot_minutes = 15);
DemandTrace load_trace(const std::filesystem::path& path, int slot_minutes = 15);
void write_trace(std::ostream& out, const DemandTrace& trace);

struct SynthTraceSpec {
  int days = 1;
  int slot_minutes = 15;
  double base = 2.0e6;           // requests per slot
  double amplitude = 1.4e6;
  double period_slots = 96.0;
  double phase_slots = 0.0;
  double noise_sd = 0.0;
  std::uint64_t seed = 1;
};

// base + amplitude * sin(2 pi (t - phase) / period) + N(0, noise_sd), clipped
// at 0. Requires base >= amplitude >= 0.
DemandTrace synth_trace(const SynthTraceSpec& spec);

int slots_per_day(int slot_minutes);
std::vector<DemandTrace> split_days(const DemandTrace& trace);

// Rotate each day of the trace circularly by `slots` (positive moves demand
// later). Daily totals are unchanged.
DemandTrace time_shift(const DemandTrace& trace, int slots);

// Slot offset for a UTC offset in hours: round(hours * 60 / slot_minutes).
int utc_offset_slots(double hours, int slot_minutes);

struct ClientSplitSpec {
  double mean = 1.0;
  double sd = 0.3;
  std::uint64_t seed = 1;
};

// Per-client demand [i][t]. Weights w_i = max(N(mean, sd), 0.01), normalized
// to sum to one, are drawn once per client; D_i(t) = w_i * D(t).
struct ClientDemandMatrix {
  std::vector<double> weights;
  std::vector<std::vector<double>> demand;
};

ClientDemandMatrix split_clients(const DemandTrace& trace, std::size_t clients,
                                 const ClientSplitSpec& spec);

}  // namespace peakcut::harness
