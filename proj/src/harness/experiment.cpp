#include "peakcut/harness/experiment.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "harness/csv.hpp"
#include "peakcut/pipeline.hpp"
#include "peakcut/routing.hpp"
#include "peakcut/scheduler.hpp"
#include "peakcut/subgradient.hpp"

namespace peakcut::harness {

using nlohmann::json;

namespace {

constexpr const char* kToolName = "peakcut";
constexpr const char* kToolVersion = "1.0.0";

// Values as they appear in the files, so quantities derived from them (the
// savings) can be recomputed from the files alone.
double round9(double value) { return std::strtod(csv::format(value).c_str(), nullptr); }

bool wanted(const ExperimentConfig& config, const std::string& scheme) {
  if (config.schemes.empty()) {
    const auto all = scheme_names(config.scenario);
    return std::find(all.begin(), all.end(), scheme) != all.end();
  }
  return std::find(config.schemes.begin(), config.schemes.end(), scheme) !=
         config.schemes.end();
}

SchemeResult from_schedule(const std::string& name, const ScheduleResult& result,
                           const DemandTrace& trace, const SlaPolicy& policy,
                           const DatacenterEntry& dc) {
  SchemeResult out;
  out.name = name;
  out.total = result.cost;
  out.datacenters = {dc.name};
  out.per_datacenter = {result.cost};
  out.power_kw = {schedule_power_kw(result.schedule, trace, policy, dc.power)};
  return out;
}

SchemeResult from_routing(const std::string& name, const RoutingSolution& solution,
                          const RoutingProblem& problem) {
  SchemeResult out;
  out.name = name;
  const RoutingCost cost = routing_objective(solution, problem);
  out.total = cost.total;
  out.datacenters = problem.datacenter_names;
  out.per_datacenter = cost.per_datacenter;
  for (std::size_t j = 0; j < problem.datacenters; ++j) {
    out.power_kw.push_back(routed_power_kw(solution, problem, j));
  }
  return out;
}

template <typename Result>
void attach_log(SchemeResult& out, const Result& result, ExperimentReport& report) {
  out.iterations = result.iterations;
  out.converged = result.converged;
  out.log = result.log;
  if (!result.converged) report.warnings.push_back(out.name + ": " + result.warning);
}

template <typename F>
auto stage(const std::string& name, F&& body) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

void run_single_dc(const ExperimentConfig& config, ExperimentReport& report) {
  const DatacenterEntry& dc = config.datacenters.front();
  const SlaPolicy policy = config.sla();
  const Tariff tariff = config.tariff_table().get(dc.tariff);
  const DemandTrace trace = stage("inputs", [&] {
    const DemandTrace raw = build_trace(config);
    return time_shift(raw, utc_offset_slots(dc.utc_offset_hours, config.slot_minutes));
  });
  const std::vector<DemandTrace> days = split_days(trace);

  if (wanted(config, "baseline")) {
    stage("solve:baseline", [&] {
      ScheduleResult r;
      r.schedule = Schedule::all_high(trace.size());
      r.cost = evaluate_schedule(r.schedule, trace, policy, tariff, dc.power);
      report.schemes.push_back(from_schedule("baseline", r, trace, policy, dc));
    });
  }
  if (wanted(config, "random")) {
    stage("solve:random", [&] {
      Schedule schedule;
      for (std::size_t d = 0; d < days.size(); ++d) {
        const Schedule daily =
            schedule_random(days[d], policy, derive_seed(config.random_seed, d)).schedule;
        schedule.modes.insert(schedule.modes.end(), daily.modes.begin(), daily.modes.end());
      }
      ScheduleResult r;
      r.schedule = std::move(schedule);
      r.cost = evaluate_schedule(r.schedule, trace, policy, tariff, dc.power);
      report.schemes.push_back(from_schedule("random", r, trace, policy, dc));
    });
  }
  if (wanted(config, "greedy")) {
    stage("solve:greedy", [&] {
      const ScheduleResult r =
          schedule_horizon(days, policy, tariff, dc.power, HorizonMode::kPerDay);
      report.schemes.push_back(from_schedule("greedy", r, trace, policy, dc));
    });
  }
  if (wanted(config, "best")) {
    stage("solve:best", [&] {
      const ScheduleResult r =
          schedule_horizon(days, policy, tariff, dc.power, HorizonMode::kWholeHorizon);
      report.schemes.push_back(from_schedule("best", r, trace, policy, dc));
    });
  }
  if (wanted(config, "bruteforce")) {
    stage("solve:bruteforce", [&] {
      const ScheduleResult r = schedule_bruteforce(trace, policy, tariff, dc.power);
      report.schemes.push_back(from_schedule("bruteforce", r, trace, policy, dc));
    });
  }
}

void run_routing(const ExperimentConfig& config, ExperimentReport& report) {
  const RoutingProblem problem = stage("inputs", [&] { return build_routing_problem(config); });

  if (wanted(config, "baseline")) {
    stage("solve:baseline", [&] {
      report.schemes.push_back(from_routing("baseline", route_closest(problem), problem));
    });
  }
  if (wanted(config, "energy")) {
    stage("solve:energy", [&] {
      const AdmmResult r = baseline_energy_only(problem, config.admm);
      SchemeResult s = from_routing("energy", r.solution, problem);
      attach_log(s, r, report);
      report.schemes.push_back(std::move(s));
    });
  }
  if (wanted(config, "demand")) {
    stage("solve:demand", [&] {
      const AdmmResult r = baseline_demand_only(problem, config.admm);
      SchemeResult s = from_routing("demand", r.solution, problem);
      attach_log(s, r, report);
      report.schemes.push_back(std::move(s));
    });
  }
  const bool need_admm = wanted(config, "admm") || wanted(config, "admm+alg1");
  std::optional<AdmmResult> admm;
  if (need_admm) {
    admm = stage("solve:admm", [&] { return admm_solve(problem, config.admm); });
  }
  if (wanted(config, "admm")) {
    stage("solve:admm", [&] {
      SchemeResult s = from_routing("admm", admm->solution, problem);
      attach_log(s, *admm, report);
      report.schemes.push_back(std::move(s));
    });
  }
  if (wanted(config, "admm+alg1")) {
    stage("solve:admm+alg1", [&] {
      SchemeResult s;
      s.name = "admm+alg1";
      s.datacenters = problem.datacenter_names;
      std::vector<CostReport> reports;
      double demand = 0.0;
      double high = 0.0;
      for (std::size_t j = 0; j < problem.datacenters; ++j) {
        const DemandTrace load = aggregate_trace(admm->solution, problem, j);
        const ScheduleResult r = schedule_greedy(load, problem.sla, problem.tariffs[j],
                                                 problem.power_models[j]);
        s.per_datacenter.push_back(r.cost);
        s.power_kw.push_back(
            schedule_power_kw(r.schedule, load, problem.sla, problem.power_models[j]));
        demand += load.total();
        high += load.total() * (1.0 - r.low_mode_demand_fraction);
      }
      s.total = sum_reports(s.per_datacenter);
      s.total.sla_attainment = demand > 0.0 ? high / demand : 1.0;
      s.iterations = admm->iterations;
      s.converged = admm->converged;
      report.schemes.push_back(std::move(s));
    });
  }
  if (wanted(config, "subgradient")) {
    stage("solve:subgradient", [&] {
      const SubgradientResult r = subgradient_solve(problem, config.subgradient);
      SchemeResult s = from_routing("subgradient", r.solution, problem);
      attach_log(s, r, report);
      report.schemes.push_back(std::move(s));
    });
  }
}

json cost_json(const CostReport& c) {
  return json{{"peak_kw", round9(c.peak_kw)},
              {"energy_kwh", round9(c.energy_kwh)},
              {"demand_charge_usd", round9(c.demand_charge_usd)},
              {"energy_charge_usd", round9(c.energy_charge_usd)},
              {"total_usd", round9(c.total_usd)},
              {"sla_attainment", round9(c.sla_attainment)},
              {"idle_kw", round9(c.idle_kw)}};
}

}  // namespace

bool ExperimentReport::converged() const {
  return std::all_of(schemes.begin(), schemes.end(),
                     [](const SchemeResult& s) { return s.converged; });
}

const SchemeResult& ExperimentReport::scheme(const std::string& name) const {
  for (const SchemeResult& s : schemes) {
    if (s.name == name) return s;
  }
  throw OutOfRange("no scheme '" + name + "' in report");
}

ExperimentReport run_scenario(const ExperimentConfig& config) {
  stage("config", [&] { config.validate(); });
  ExperimentReport report;
  report.scenario = config.scenario;
  if (config.scenario == Scenario::kSingleDc) {
    run_single_dc(config, report);
  } else {
    run_routing(config, report);
  }
  const auto base = std::find_if(report.schemes.begin(), report.schemes.end(),
                                 [](const SchemeResult& s) { return s.name == "baseline"; });
  if (base != report.schemes.end()) {
    const double baseline = round9(base->total.total_usd);
    for (SchemeResult& s : report.schemes) {
      s.saving = baseline > 0.0 ? 1.0 - round9(s.total.total_usd) / baseline : 0.0;
    }
  }
  return report;
}

std::vector<std::pair<std::string, std::string>> render_report(
    const ExperimentReport& report, const ExperimentConfig& config,
    const WriteOptions& options) {
  const bool has_baseline =
      std::any_of(report.schemes.begin(), report.schemes.end(),
                  [](const SchemeResult& s) { return s.name == "baseline"; });
  json costs;
  costs["scenario"] = to_string(report.scenario);
  costs["baseline"] = has_baseline ? json("baseline") : json(nullptr);
  costs["schemes"] = json::array();
  for (const SchemeResult& s : report.schemes) {
    json entry;
    entry["name"] = s.name;
    entry["total"] = cost_json(s.total);
    if (has_baseline) entry["saving"] = round9(s.saving);
    entry["datacenters"] = json::array();
    for (std::size_t j = 0; j < s.per_datacenter.size(); ++j) {
      json dc = cost_json(s.per_datacenter[j]);
      dc["name"] = s.datacenters[j];
      entry["datacenters"].push_back(dc);
    }
    if (s.iterations) {
      entry["iterations"] = *s.iterations;
      entry["converged"] = s.converged;
    }
    costs["schemes"].push_back(entry);
  }
  costs["warnings"] = report.warnings;

  std::ostringstream power;
  power << "scheme,datacenter,slot,power_kw\n";
  for (const SchemeResult& s : report.schemes) {
    for (std::size_t j = 0; j < s.power_kw.size(); ++j) {
      for (std::size_t t = 0; t < s.power_kw[j].size(); ++t) {
        power << s.name << ',' << s.datacenters[j] << ',' << t << ','
              << csv::format(s.power_kw[j][t]) << '\n';
      }
    }
  }

  std::ostringstream convergence;
  convergence << "solver,iteration,primal,dual,objective"
              << (options.include_timing ? ",ms" : "") << '\n';
  for (const SchemeResult& s : report.schemes) {
    if (!s.iterations || s.name == "admm+alg1") continue;
    for (const IterationRecord& r : s.log.records) {
      convergence << s.name << ',' << r.iteration << ',' << csv::format(r.primal) << ','
                  << csv::format(r.dual) << ',' << csv::format(r.objective);
      if (options.include_timing) convergence << ',' << csv::format(r.ms);
      convergence << '\n';
    }
  }

  json manifest;
  manifest["tool"] = kToolName;
  manifest["version"] = kToolVersion;
  manifest["config"] = json::parse(config_to_json(config));
  manifest["outputs"] = {"costs.json", "power_series.csv", "convergence.csv"};

  return {{"costs.json", costs.dump(2) + "\n"},
          {"power_series.csv", power.str()},
          {"convergence.csv", convergence.str()},
          {"manifest.json", manifest.dump(2) + "\n"}};
}

ExperimentReport run_experiment(const ExperimentConfig& config,
                                const std::filesystem::path& out_dir,
                                const WriteOptions& options) {
  namespace fs = std::filesystem;
  const std::vector<std::string> names = {"costs.json", "power_series.csv",
                                          "convergence.csv", "manifest.json"};
  auto cleanup = [&] {
    std::error_code ec;
    for (const std::string& n : names) fs::remove(out_dir / n, ec);
  };
  try {
    ExperimentReport report = run_scenario(config);
    const auto files = stage("write", [&] { return render_report(report, config, options); });
    stage("write", [&] {
      fs::create_directories(out_dir);
      for (const auto& [name, body] : files) {
        std::ofstream out(out_dir / name, std::ios::binary | std::ios::trunc);
        out << body;
        if (!out) throw Error("cannot write " + (out_dir / name).string());
      }
    });
    return report;
  } catch (...) {
    cleanup();
    throw;
  }
}

}  // namespace peakcut::harness
