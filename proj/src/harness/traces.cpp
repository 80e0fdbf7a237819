#include "peakcut/harness/traces.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include "harness/csv.hpp"

namespace peakcut::harness {

DemandTrace parse_trace(std::istream& in, int slot_minutes) {
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  std::vector<double> demand;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = csv::trim(line);
    if (row.empty()) continue;
    if (!header) {
      if (row != "slot,requests") {
        throw ParseError(line_no, "expected header 'slot,requests'");
      }
      header = true;
      continue;
    }
    const std::vector<std::string_view> cells = csv::split(row);
    if (cells.size() != 2) throw ParseError(line_no, "expected 2 fields");
    const long long slot = csv::parse_int(cells[0], line_no);
    const double requests = csv::parse_double(cells[1], line_no);
    if (slot != static_cast<long long>(demand.size())) {
      throw GapError(line_no, "expected slot " + std::to_string(demand.size()) +
                                   ", found " + std::to_string(slot));
    }
    if (!(requests >= 0.0) || !std::isfinite(requests)) {
      throw ParseError(line_no, "requests must be finite and non-negative");
    }
    demand.push_back(requests);
  }
  if (!header) throw ParseError(line_no, "missing header 'slot,requests'");
  if (demand.empty()) throw ParseError(line_no, "trace has no rows");
  return DemandTrace(std::move(demand), slot_minutes);
}

DemandTrace load_trace(const std::filesystem::path& path, int slot_minutes) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace file " + path.string());
  return parse_trace(in, slot_minutes);
}

void write_trace(std::ostream& out, const DemandTrace& trace) {
  out << "slot,requests\n";
  for (std::size_t t = 0; t < trace.size(); ++t) {
    out << t << ',' << csv::format(trace[t]) << '\n';
  }
}

DemandTrace synth_trace(const SynthTraceSpec& spec) {
  if (spec.days < 1) throw DomainError("days must be >= 1");
  if (!(spec.amplitude >= 0.0) || !(spec.base >= spec.amplitude)) {
    throw DomainError("synthetic trace needs base >= amplitude >= 0");
  }
  if (!(spec.period_slots > 0.0) || !(spec.noise_sd >= 0.0)) {
    throw DomainError("period must be positive and noise_sd non-negative");
  }
  const std::size_t slots =
      static_cast<std::size_t>(spec.days) * slots_per_day(spec.slot_minutes);
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> demand(slots);
  for (std::size_t t = 0; t < slots; ++t) {
    const double phase = 2.0 * std::numbers::pi *
                         (static_cast<double>(t) - spec.phase_slots) /
                         spec.period_slots;
    double value = spec.base + spec.amplitude * std::sin(phase);
    // Draw unconditionally so the noise stream does not depend on noise_sd.
    const double z = noise(rng);
    if (spec.noise_sd > 0.0) value += spec.noise_sd * z;
    demand[t] = std::max(value, 0.0);
  }
  return DemandTrace(std::move(demand), spec.slot_minutes);
}

int slots_per_day(int slot_minutes) {
  if (slot_minutes < 1 || 1440 % slot_minutes != 0) {
    throw DomainError("slot_minutes must divide 1440");
  }
  return 1440 / slot_minutes;
}

std::vector<DemandTrace> split_days(const DemandTrace& trace) {
  const std::size_t per_day = slots_per_day(trace.slot_minutes());
  if (trace.size() % per_day != 0) {
    throw LengthMismatch("trace length " + std::to_string(trace.size()) +
                         " is not a whole number of days");
  }
  std::vector<DemandTrace> days;
  for (std::size_t start = 0; start < trace.size(); start += per_day) {
    std::vector<double> day(trace.values().begin() + start,
                            trace.values().begin() + start + per_day);
    days.emplace_back(std::move(day), trace.slot_minutes());
  }
  return days;
}

DemandTrace time_shift(const DemandTrace& trace, int slots) {
  const std::size_t per_day = slots_per_day(trace.slot_minutes());
  if (trace.size() % per_day != 0) {
    throw LengthMismatch("time_shift needs a whole number of days");
  }
  const long long n = static_cast<long long>(per_day);
  const long long shift = ((slots % n) + n) % n;
  std::vector<double> out(trace.size());
  for (std::size_t start = 0; start < trace.size(); start += per_day) {
    for (long long t = 0; t < n; ++t) {
      out[start + (t + shift) % n] = trace[start + t];
    }
  }
  return DemandTrace(std::move(out), trace.slot_minutes());
}

int utc_offset_slots(double hours, int slot_minutes) {
  return static_cast<int>(std::lround(hours * 60.0 / slot_minutes));
}

ClientDemandMatrix split_clients(const DemandTrace& trace, std::size_t clients,
                                 const ClientSplitSpec& spec) {
  if (clients < 1) throw DomainError("client count must be >= 1");
  if (!(spec.sd >= 0.0) || !std::isfinite(spec.mean)) {
    throw DomainError("split needs finite mean and sd >= 0");
  }
  ClientDemandMatrix out;
  out.weights.resize(clients);
  if (clients == 1) {
    out.weights[0] = 1.0;
  } else {
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    double sum = 0.0;
    for (double& w : out.weights) {
      w = std::max(spec.mean + spec.sd * normal(rng), 0.01);
      sum += w;
    }
    for (double& w : out.weights) w /= sum;
  }
  out.demand.assign(clients, std::vector<double>(trace.size()));
  for (std::size_t i = 0; i < clients; ++i) {
    for (std::size_t t = 0; t < trace.size(); ++t) {
      out.demand[i][t] = out.weights[i] * trace[t];
    }
  }
  return out;
}

}  // namespace peakcut::harness
