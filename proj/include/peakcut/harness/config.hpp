#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "peakcut/admm.hpp"
#include "peakcut/harness/latency.hpp"
#include "peakcut/harness/tariff_table.hpp"
#include "peakcut/harness/traces.hpp"
#include "peakcut/model.hpp"
#include "peakcut/routing.hpp"
#include "peakcut/subgradient.hpp"

namespace peakcut::harness {

struct DatacenterEntry {
  std::string name;
  std::string tariff;              // key into the tariff table
  double utc_offset_hours = 0.0;   // time shift applied to the trace copy
  double position = 0.5;           // on the synthetic latency line
  PowerModel power;
};

enum class Scenario { kSingleDc, kGeo, kConvergence };

std::string to_string(Scenario scenario);
Scenario parse_scenario(const std::string& name);  // ConfigError

// Fully resolved experiment description. Everything random is pinned by an
// explicit seed; seeds absent from the input are derived from `seed`.
struct ExperimentConfig {
  Scenario scenario = Scenario::kGeo;
  std::uint64_t seed = 1;
  int slot_minutes = 15;
  int horizon_days = 1;

  std::optional<std::filesystem::path> trace_file;
  SynthTraceSpec trace;            // days and slot_minutes follow the fields above

  std::size_t clients = 100;
  ClientSplitSpec split;

  std::vector<DatacenterEntry> datacenters;
  std::vector<Tariff> tariffs;     // added to (or overriding) the bundled table

  std::optional<std::filesystem::path> latency_file;
  SynthLatencySpec latency;        // clients and positions follow the roster
  double latency_bound_ms = 100.0;

  double percentile = 0.95;
  double high_quality = 0.99;
  double low_quality = 0.8;
  double quality_c2 = -0.82129975;
  double quality_c1 = 1.67356677;
  double quality_c0 = 0.14773298;

  AdmmOptions admm;
  SubgradientOptions subgradient;
  std::uint64_t random_seed = 1;   // Random scheduler

  std::vector<std::string> schemes;  // empty: every scheme of the scenario

  TariffTable tariff_table() const;
  SlaPolicy sla() const;
  // Throws ConfigError on missing tariffs, empty roster, bad sizes or
  // unknown schemes; runs each component's own validation.
  void validate() const;
};

// Parse a config or a manifest (whose "config" member is used). Relative
// file paths resolve against `base_dir`. `--seed` style overrides go through
// reseed() after parsing so derived seeds follow the new master seed.
struct ParsedConfig {
  ExperimentConfig config;
  // Which component seeds were given explicitly; the rest are derived.
  bool trace_seed_given = false;
  bool split_seed_given = false;
  bool latency_seed_given = false;
  bool random_seed_given = false;

  void reseed(std::uint64_t master);
};

ParsedConfig parse_config(const std::string& text,
                          const std::filesystem::path& base_dir = ".");
ParsedConfig load_config(const std::filesystem::path& path);

// Canonical JSON of the resolved config, stable across parse/serialize
// round trips.
std::string config_to_json(const ExperimentConfig& config);

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

std::vector<std::string> scheme_names(Scenario scenario);

// Inputs built from the config.
DemandTrace build_trace(const ExperimentConfig& config);
LatencyMatrix build_latency(const ExperimentConfig& config);
// Sum of the trace time-shifted by each datacenter's UTC offset, split over
// the configured clients.
RoutingProblem build_routing_problem(const ExperimentConfig& config);

}  // namespace peakcut::harness
