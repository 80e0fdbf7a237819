#include "peakcut/harness/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace peakcut::harness {

using nlohmann::json;

namespace {

constexpr std::uint64_t kTraceStream = 1;
constexpr std::uint64_t kSplitStream = 2;
constexpr std::uint64_t kLatencyStream = 3;
constexpr std::uint64_t kRandomStream = 4;

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* a) { return key == a; })) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
T read(const json& obj, const char* key, T fallback, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + " has the wrong type");
  }
}

bool has(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it != obj.end() && !it->is_null();
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::string& file) {
  std::filesystem::path p(file);
  if (p.is_relative()) p = base / p;
  return std::filesystem::absolute(p).lexically_normal();
}

Tariff read_tariff(const json& obj) {
  check_keys(obj, "tariffs[]",
             {"name", "demand_price_usd_per_kw", "energy_price_usd_per_kwh"});
  Tariff t;
  t.name = read<std::string>(obj, "name", "", "tariffs[]");
  t.demand_price_usd_per_kw = read<double>(obj, "demand_price_usd_per_kw", 0.0, "tariffs[]");
  t.energy_price_usd_per_kwh = read<double>(obj, "energy_price_usd_per_kwh", 0.0, "tariffs[]");
  if (t.name.empty()) throw ConfigError("tariffs[] entry needs a name");
  return t;
}

DatacenterEntry read_datacenter(const json& obj) {
  const std::string w = "datacenters[]";
  check_keys(obj, w,
             {"name", "tariff", "servers", "utc_offset_hours", "position", "idle_w",
              "peak_w", "requests_per_server_slot"});
  DatacenterEntry dc;
  dc.name = read<std::string>(obj, "name", "", w);
  dc.tariff = read<std::string>(obj, "tariff", dc.name, w);
  dc.utc_offset_hours = read<double>(obj, "utc_offset_hours", 0.0, w);
  dc.position = read<double>(obj, "position", 0.5, w);
  dc.power.servers = read<int>(obj, "servers", dc.power.servers, w);
  dc.power.idle_w = read<double>(obj, "idle_w", dc.power.idle_w, w);
  dc.power.peak_w = read<double>(obj, "peak_w", dc.power.peak_w, w);
  dc.power.requests_per_server_slot =
      read<double>(obj, "requests_per_server_slot", dc.power.requests_per_server_slot, w);
  if (dc.name.empty()) throw ConfigError("datacenters[] entry needs a name");
  return dc;
}

json to_json(const DatacenterEntry& dc) {
  return json{{"name", dc.name},
              {"tariff", dc.tariff},
              {"servers", dc.power.servers},
              {"utc_offset_hours", dc.utc_offset_hours},
              {"position", dc.position},
              {"idle_w", dc.power.idle_w},
              {"peak_w", dc.power.peak_w},
              {"requests_per_server_slot", dc.power.requests_per_server_slot}};
}

}  // namespace

std::string to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::kSingleDc: return "single-dc";
    case Scenario::kGeo: return "geo";
    case Scenario::kConvergence: return "convergence";
  }
  return "?";
}

Scenario parse_scenario(const std::string& name) {
  if (name == "single-dc") return Scenario::kSingleDc;
  if (name == "geo") return Scenario::kGeo;
  if (name == "convergence") return Scenario::kConvergence;
  throw ConfigError("unknown scenario '" + name + "'");
}

std::vector<std::string> scheme_names(Scenario scenario) {
  switch (scenario) {
    case Scenario::kSingleDc: return {"baseline", "random", "greedy", "best"};
    case Scenario::kGeo: return {"baseline", "energy", "demand", "admm", "admm+alg1"};
    case Scenario::kConvergence: return {"baseline", "admm", "subgradient"};
  }
  return {};
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  // splitmix64 finalizer over (master, stream)
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

TariffTable ExperimentConfig::tariff_table() const {
  TariffTable table = TariffTable::bundled();
  for (const Tariff& t : tariffs) table.add(t);
  return table;
}

SlaPolicy ExperimentConfig::sla() const {
  return SlaPolicy(percentile, high_quality, low_quality,
                   QualityProfile(quality_c2, quality_c1, quality_c0));
}

void ExperimentConfig::validate() const {
  if (datacenters.empty()) throw ConfigError("datacenter roster is empty");
  if (clients < 1) throw ConfigError("client count must be >= 1");
  if (horizon_days < 1) throw ConfigError("horizon_days must be >= 1");
  slots_per_day(slot_minutes);
  const TariffTable table = tariff_table();
  std::set<std::string> names;
  for (const DatacenterEntry& dc : datacenters) {
    if (!names.insert(dc.name).second) {
      throw ConfigError("duplicate datacenter '" + dc.name + "'");
    }
    table.get(dc.tariff);
    dc.power.validate();
    if (!(dc.position >= 0.0 && dc.position <= 1.0)) {
      throw ConfigError("datacenter '" + dc.name + "' position must lie in [0, 1]");
    }
  }
  if (!(latency_bound_ms > 0.0)) throw ConfigError("latency_bound_ms must be > 0");
  sla();
  admm.validate();
  subgradient.validate();
  std::vector<std::string> known = scheme_names(scenario);
  if (scenario == Scenario::kSingleDc) known.push_back("bruteforce");
  for (const std::string& s : schemes) {
    if (std::find(known.begin(), known.end(), s) == known.end()) {
      throw ConfigError("scheme '" + s + "' does not belong to scenario " +
                        to_string(scenario));
    }
  }
}

void ParsedConfig::reseed(std::uint64_t master) {
  config.seed = master;
  if (!trace_seed_given) config.trace.seed = derive_seed(master, kTraceStream);
  if (!split_seed_given) config.split.seed = derive_seed(master, kSplitStream);
  if (!latency_seed_given) config.latency.seed = derive_seed(master, kLatencyStream);
  if (!random_seed_given) config.random_seed = derive_seed(master, kRandomStream);
}

ParsedConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (root.is_object() && root.contains("config") && root.contains("tool")) {
    root = root["config"];  // a manifest from an earlier run
  }
  const std::string w = "config";
  check_keys(root, w,
             {"scenario", "seed", "slot_minutes", "horizon_days", "trace", "clients",
              "datacenters", "tariffs", "latency", "latency_bound_ms", "sla", "admm",
              "subgradient", "random_seed", "schemes"});

  ParsedConfig parsed;
  ExperimentConfig& c = parsed.config;
  c.scenario = parse_scenario(read<std::string>(root, "scenario", "geo", w));
  c.slot_minutes = read<int>(root, "slot_minutes", c.slot_minutes, w);
  c.horizon_days = read<int>(root, "horizon_days", c.horizon_days, w);
  c.latency_bound_ms = read<double>(root, "latency_bound_ms", c.latency_bound_ms, w);

  if (has(root, "trace")) {
    const json& tr = root["trace"];
    check_keys(tr, "trace", {"file", "synthetic"});
    if (has(tr, "file")) c.trace_file = resolve(base_dir, tr["file"].get<std::string>());
    if (has(tr, "synthetic")) {
      const json& s = tr["synthetic"];
      const std::string ws = "trace.synthetic";
      check_keys(s, ws, {"base", "amplitude", "period_slots", "phase_slots", "noise_sd", "seed"});
      c.trace.base = read<double>(s, "base", c.trace.base, ws);
      c.trace.amplitude = read<double>(s, "amplitude", c.trace.amplitude, ws);
      c.trace.period_slots = read<double>(s, "period_slots", c.trace.period_slots, ws);
      c.trace.phase_slots = read<double>(s, "phase_slots", c.trace.phase_slots, ws);
      c.trace.noise_sd = read<double>(s, "noise_sd", c.trace.noise_sd, ws);
      parsed.trace_seed_given = has(s, "seed");
      c.trace.seed = read<std::uint64_t>(s, "seed", 0, ws);
    }
  }
  c.trace.days = c.horizon_days;
  c.trace.slot_minutes = c.slot_minutes;

  if (has(root, "clients")) {
    const json& cl = root["clients"];
    check_keys(cl, "clients", {"count", "mean", "sd", "seed"});
    c.clients = read<std::size_t>(cl, "count", c.clients, "clients");
    c.split.mean = read<double>(cl, "mean", c.split.mean, "clients");
    c.split.sd = read<double>(cl, "sd", c.split.sd, "clients");
    parsed.split_seed_given = has(cl, "seed");
    c.split.seed = read<std::uint64_t>(cl, "seed", 0, "clients");
  }

  if (has(root, "tariffs")) {
    for (const json& t : root["tariffs"]) c.tariffs.push_back(read_tariff(t));
  }
  if (!has(root, "datacenters") || !root["datacenters"].is_array()) {
    throw ConfigError("config needs a 'datacenters' array");
  }
  for (const json& dc : root["datacenters"]) c.datacenters.push_back(read_datacenter(dc));

  if (has(root, "latency")) {
    const json& lt = root["latency"];
    check_keys(lt, "latency", {"file", "synthetic"});
    if (has(lt, "file")) c.latency_file = resolve(base_dir, lt["file"].get<std::string>());
    if (has(lt, "synthetic")) {
      const json& s = lt["synthetic"];
      const std::string ws = "latency.synthetic";
      check_keys(s, ws, {"base_min_ms", "base_max_ms", "geo_ms", "spread", "seed"});
      c.latency.base_min_ms = read<double>(s, "base_min_ms", c.latency.base_min_ms, ws);
      c.latency.base_max_ms = read<double>(s, "base_max_ms", c.latency.base_max_ms, ws);
      c.latency.geo_ms = read<double>(s, "geo_ms", c.latency.geo_ms, ws);
      c.latency.spread = read<double>(s, "spread", c.latency.spread, ws);
      parsed.latency_seed_given = has(s, "seed");
      c.latency.seed = read<std::uint64_t>(s, "seed", 0, ws);
    }
  }
  c.latency.clients = c.clients;
  c.latency.dc_positions.clear();
  for (const DatacenterEntry& dc : c.datacenters) c.latency.dc_positions.push_back(dc.position);

  if (has(root, "sla")) {
    const json& s = root["sla"];
    check_keys(s, "sla", {"percentile", "high_quality", "low_quality", "profile"});
    c.percentile = read<double>(s, "percentile", c.percentile, "sla");
    c.high_quality = read<double>(s, "high_quality", c.high_quality, "sla");
    c.low_quality = read<double>(s, "low_quality", c.low_quality, "sla");
    if (has(s, "profile")) {
      const auto p = read<std::vector<double>>(s, "profile", {}, "sla");
      if (p.size() != 3) throw ConfigError("sla.profile must be [c2, c1, c0]");
      c.quality_c2 = p[0];
      c.quality_c1 = p[1];
      c.quality_c0 = p[2];
    }
  }

  if (has(root, "admm")) {
    const json& a = root["admm"];
    check_keys(a, "admm",
               {"rho", "max_iterations", "eps_abs", "eps_rel", "threads", "normalize"});
    c.admm.rho = read<double>(a, "rho", c.admm.rho, "admm");
    c.admm.max_iterations = read<int>(a, "max_iterations", c.admm.max_iterations, "admm");
    c.admm.eps_abs = read<double>(a, "eps_abs", c.admm.eps_abs, "admm");
    c.admm.eps_rel = read<double>(a, "eps_rel", c.admm.eps_rel, "admm");
    c.admm.threads = read<int>(a, "threads", c.admm.threads, "admm");
    c.admm.normalize = read<bool>(a, "normalize", c.admm.normalize, "admm");
  }
  if (has(root, "subgradient")) {
    const json& s = root["subgradient"];
    const std::string ws = "subgradient";
    check_keys(s, ws,
               {"rho", "initial_step", "max_iterations", "eps_abs", "eps_rel",
                "max_inner_sweeps", "threads", "normalize"});
    c.subgradient.rho = read<double>(s, "rho", c.subgradient.rho, ws);
    c.subgradient.initial_step = read<double>(s, "initial_step", c.subgradient.initial_step, ws);
    c.subgradient.max_iterations =
        read<int>(s, "max_iterations", c.subgradient.max_iterations, ws);
    c.subgradient.eps_abs = read<double>(s, "eps_abs", c.subgradient.eps_abs, ws);
    c.subgradient.eps_rel = read<double>(s, "eps_rel", c.subgradient.eps_rel, ws);
    c.subgradient.max_inner_sweeps =
        read<int>(s, "max_inner_sweeps", c.subgradient.max_inner_sweeps, ws);
    c.subgradient.threads = read<int>(s, "threads", c.subgradient.threads, ws);
    c.subgradient.normalize = read<bool>(s, "normalize", c.subgradient.normalize, ws);
  }
  parsed.random_seed_given = has(root, "random_seed");
  c.random_seed = read<std::uint64_t>(root, "random_seed", 0, w);
  c.schemes = read<std::vector<std::string>>(root, "schemes", {}, w);

  parsed.reseed(read<std::uint64_t>(root, "seed", 1, w));
  c.validate();
  return parsed;
}

ParsedConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.parent_path().empty() ? "." : path.parent_path());
}

std::string config_to_json(const ExperimentConfig& c) {
  json root;
  root["scenario"] = to_string(c.scenario);
  root["seed"] = c.seed;
  root["slot_minutes"] = c.slot_minutes;
  root["horizon_days"] = c.horizon_days;
  json trace;
  if (c.trace_file) trace["file"] = c.trace_file->string();
  trace["synthetic"] = {{"base", c.trace.base},
                        {"amplitude", c.trace.amplitude},
                        {"period_slots", c.trace.period_slots},
                        {"phase_slots", c.trace.phase_slots},
                        {"noise_sd", c.trace.noise_sd},
                        {"seed", c.trace.seed}};
  root["trace"] = trace;
  root["clients"] = {{"count", c.clients},
                     {"mean", c.split.mean},
                     {"sd", c.split.sd},
                     {"seed", c.split.seed}};
  root["datacenters"] = json::array();
  for (const DatacenterEntry& dc : c.datacenters) root["datacenters"].push_back(to_json(dc));
  // Resolve every referenced tariff into the manifest so it stands alone.
  const TariffTable table = c.tariff_table();
  std::set<std::string> used;
  for (const DatacenterEntry& dc : c.datacenters) used.insert(dc.tariff);
  for (const Tariff& t : c.tariffs) used.insert(t.name);
  root["tariffs"] = json::array();
  for (const std::string& name : used) {
    const Tariff& t = table.get(name);
    root["tariffs"].push_back({{"name", t.name},
                               {"demand_price_usd_per_kw", t.demand_price_usd_per_kw},
                               {"energy_price_usd_per_kwh", t.energy_price_usd_per_kwh}});
  }
  json latency;
  if (c.latency_file) latency["file"] = c.latency_file->string();
  latency["synthetic"] = {{"base_min_ms", c.latency.base_min_ms},
                          {"base_max_ms", c.latency.base_max_ms},
                          {"geo_ms", c.latency.geo_ms},
                          {"spread", c.latency.spread},
                          {"seed", c.latency.seed}};
  root["latency"] = latency;
  root["latency_bound_ms"] = c.latency_bound_ms;
  root["sla"] = {{"percentile", c.percentile},
                 {"high_quality", c.high_quality},
                 {"low_quality", c.low_quality},
                 {"profile", {c.quality_c2, c.quality_c1, c.quality_c0}}};
  root["admm"] = {{"rho", c.admm.rho},
                  {"max_iterations", c.admm.max_iterations},
                  {"eps_abs", c.admm.eps_abs},
                  {"eps_rel", c.admm.eps_rel},
                  {"threads", c.admm.threads},
                  {"normalize", c.admm.normalize}};
  root["subgradient"] = {{"rho", c.subgradient.rho},
                         {"initial_step", c.subgradient.initial_step},
                         {"max_iterations", c.subgradient.max_iterations},
                         {"eps_abs", c.subgradient.eps_abs},
                         {"eps_rel", c.subgradient.eps_rel},
                         {"max_inner_sweeps", c.subgradient.max_inner_sweeps},
                         {"threads", c.subgradient.threads},
                         {"normalize", c.subgradient.normalize}};
  root["random_seed"] = c.random_seed;
  root["schemes"] = c.schemes;
  return root.dump(2);
}

DemandTrace build_trace(const ExperimentConfig& config) {
  if (config.trace_file) {
    DemandTrace trace = load_trace(*config.trace_file, config.slot_minutes);
    const std::size_t expected =
        static_cast<std::size_t>(config.horizon_days) * slots_per_day(config.slot_minutes);
    if (trace.size() != expected) {
      throw LengthMismatch("trace file has " + std::to_string(trace.size()) +
                           " slots, horizon needs " + std::to_string(expected));
    }
    return trace;
  }
  return synth_trace(config.trace);
}

LatencyMatrix build_latency(const ExperimentConfig& config) {
  LatencyMatrix latency =
      config.latency_file ? load_latency(*config.latency_file) : synth_latency(config.latency);
  if (latency.size() != config.clients ||
      latency.front().size() != config.datacenters.size()) {
    throw LengthMismatch("latency matrix is " + std::to_string(latency.size()) + "x" +
                         std::to_string(latency.front().size()) + ", roster needs " +
                         std::to_string(config.clients) + "x" +
                         std::to_string(config.datacenters.size()));
  }
  return latency;
}

RoutingProblem build_routing_problem(const ExperimentConfig& config) {
  const DemandTrace trace = build_trace(config);
  std::vector<double> aggregate(trace.size(), 0.0);
  for (const DatacenterEntry& dc : config.datacenters) {
    const DemandTrace shifted =
        time_shift(trace, utc_offset_slots(dc.utc_offset_hours, config.slot_minutes));
    for (std::size_t t = 0; t < trace.size(); ++t) aggregate[t] += shifted[t];
  }
  const DemandTrace total(std::move(aggregate), config.slot_minutes);
  const ClientDemandMatrix split = split_clients(total, config.clients, config.split);
  const LatencyMatrix latency = build_latency(config);
  const TariffTable table = config.tariff_table();

  RoutingProblem p;
  p.clients = config.clients;
  p.datacenters = config.datacenters.size();
  p.slots = trace.size();
  p.slot_minutes = config.slot_minutes;
  p.client_demand.reserve(p.clients * p.slots);
  for (const auto& row : split.demand) {
    p.client_demand.insert(p.client_demand.end(), row.begin(), row.end());
  }
  for (const auto& row : latency) {
    p.latency_ms.insert(p.latency_ms.end(), row.begin(), row.end());
  }
  p.latency_bound_ms = config.latency_bound_ms;
  for (const DatacenterEntry& dc : config.datacenters) {
    p.datacenter_names.push_back(dc.name);
    p.tariffs.push_back(table.get(dc.tariff));
    p.power_models.push_back(dc.power);
  }
  p.sla = config.sla();
  p.validate();
  return p;
}

}  // namespace peakcut::harness
