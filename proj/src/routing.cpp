#include "peakcut/routing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "peakcut/error.hpp"

namespace peakcut {

double RoutingProblem::peak_coefficient(std::size_t j) const {
  return tariffs[j].demand_price_usd_per_kw * routing_alpha() *
         power_models[j].kw_per_request();
}

double RoutingProblem::energy_coefficient(std::size_t j) const {
  return tariffs[j].energy_price_usd_per_kwh * routing_alpha() *
         power_models[j].kw_per_request() * slot_hours();
}

double RoutingProblem::total_demand(std::size_t t) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < clients; ++i) sum += demand(i, t);
  return sum;
}

void RoutingProblem::validate() const {
  if (clients == 0 || datacenters == 0 || slots == 0) {
    throw DomainError("routing problem needs I, J, T > 0");
  }
  if (slot_minutes <= 0) throw DomainError("slot_minutes must be positive");
  if (client_demand.size() != clients * slots) {
    throw DomainError("client demand matrix has the wrong shape");
  }
  if (latency_ms.size() != clients * datacenters) {
    throw DomainError("latency matrix has the wrong shape");
  }
  if (tariffs.size() != datacenters || power_models.size() != datacenters) {
    throw DomainError("need one tariff and power model per datacenter");
  }
  if (!datacenter_names.empty() && datacenter_names.size() != datacenters) {
    throw DomainError("datacenter name list has the wrong length");
  }
  if (!(latency_bound_ms > 0.0)) throw DomainError("latency bound must be > 0");
  for (const Tariff& tariff : tariffs) tariff.validate();
  for (const PowerModel& model : power_models) model.validate();
  for (double v : client_demand) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw DomainError("client demand must be finite and non-negative");
    }
  }
  for (double v : latency_ms) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError("latencies must be finite and positive");
    }
  }
  for (std::size_t i = 0; i < clients; ++i) {
    double nearest = latency(i, 0);
    for (std::size_t j = 1; j < datacenters; ++j) {
      nearest = std::min(nearest, latency(i, j));
    }
    if (nearest <= latency_bound_ms) continue;
    for (std::size_t t = 0; t < slots; ++t) {
      if (demand(i, t) > 0.0) {
        throw Infeasible("client " + std::to_string(i) +
                         " has no datacenter within the latency bound");
      }
    }
  }
  double total_capacity = 0.0;
  for (std::size_t j = 0; j < datacenters; ++j) total_capacity += capacity(j);
  for (std::size_t t = 0; t < slots; ++t) {
    if (total_demand(t) > total_capacity * (1.0 + 1e-12)) {
      throw Infeasible("slot " + std::to_string(t) +
                       " demand exceeds total datacenter capacity");
    }
  }
}

std::string to_string(Violation::Family family) {
  switch (family) {
    case Violation::Family::kConservation:
      return "conservation";
    case Violation::Family::kLatency:
      return "latency";
    case Violation::Family::kCapacity:
      return "capacity";
    case Violation::Family::kNegativity:
      return "negativity";
  }
  return "unknown";
}

std::vector<Violation> check_feasible(const RoutingSolution& solution,
                                      const RoutingProblem& problem,
                                      double relative_tolerance) {
  const AllocationTensor& d = solution.d;
  if (d.clients() != problem.clients || d.datacenters() != problem.datacenters ||
      d.slots() != problem.slots) {
    throw LengthMismatch("solution shape does not match the problem");
  }
  auto tolerance = [&](double rhs) {
    return relative_tolerance * std::max(std::abs(rhs), 1.0);
  };
  std::vector<Violation> out;
  using Family = Violation::Family;
  for (std::size_t i = 0; i < problem.clients; ++i) {
    for (std::size_t t = 0; t < problem.slots; ++t) {
      const double demand = problem.demand(i, t);
      double routed = 0.0;
      double latency_sum = 0.0;
      for (std::size_t j = 0; j < problem.datacenters; ++j) {
        const double v = d.at(i, j, t);
        if (v < -tolerance(demand)) {
          out.push_back({Family::kNegativity, static_cast<long>(i),
                         static_cast<long>(j), static_cast<long>(t), -v});
        }
        routed += v;
        latency_sum += v * problem.latency(i, j);
      }
      if (std::abs(routed - demand) > tolerance(demand)) {
        out.push_back({Family::kConservation, static_cast<long>(i), -1,
                       static_cast<long>(t), std::abs(routed - demand)});
      }
      const double bound = problem.latency_bound_ms * demand;
      if (latency_sum - bound > tolerance(bound)) {
        out.push_back({Family::kLatency, static_cast<long>(i), -1,
                       static_cast<long>(t), latency_sum - bound});
      }
    }
  }
  for (std::size_t j = 0; j < problem.datacenters; ++j) {
    const double cap = problem.capacity(j);
    for (std::size_t t = 0; t < problem.slots; ++t) {
      const auto column = d.column(j, t);
      const double load = std::accumulate(column.begin(), column.end(), 0.0);
      if (load - cap > tolerance(cap)) {
        out.push_back({Family::kCapacity, -1, static_cast<long>(j),
                       static_cast<long>(t), load - cap});
      }
    }
  }
  return out;
}

DemandTrace aggregate_trace(const RoutingSolution& solution,
                            const RoutingProblem& problem, std::size_t j) {
  std::vector<double> load(problem.slots);
  for (std::size_t t = 0; t < problem.slots; ++t) {
    const auto column = solution.d.column(j, t);
    // Clip rounding-level negatives so the trace stays valid.
    load[t] = std::max(0.0, std::accumulate(column.begin(), column.end(), 0.0));
  }
  return DemandTrace(std::move(load), problem.slot_minutes);
}

std::vector<double> routed_power_kw(const RoutingSolution& solution,
                                    const RoutingProblem& problem,
                                    std::size_t j) {
  const DemandTrace load = aggregate_trace(solution, problem, j);
  const double kw = problem.routing_alpha() * problem.power_models[j].kw_per_request();
  std::vector<double> power(problem.slots);
  for (std::size_t t = 0; t < problem.slots; ++t) power[t] = load[t] * kw;
  return power;
}

CostReport sum_reports(const std::vector<CostReport>& reports) {
  CostReport total;
  double attained = 0.0;
  for (const CostReport& r : reports) {
    total.peak_kw += r.peak_kw;
    total.energy_kwh += r.energy_kwh;
    total.demand_charge_usd += r.demand_charge_usd;
    total.energy_charge_usd += r.energy_charge_usd;
    total.idle_kw += r.idle_kw;
    attained += r.sla_attainment * r.energy_kwh;
  }
  total.total_usd = total.demand_charge_usd + total.energy_charge_usd;
  total.sla_attainment =
      total.energy_kwh > 0.0 ? attained / total.energy_kwh : 1.0;
  return total;
}

RoutingCost routing_objective(const RoutingSolution& solution,
                              const RoutingProblem& problem) {
  const std::vector<Violation> violations = check_feasible(solution, problem);
  if (!violations.empty()) {
    const Violation& v = violations.front();
    throw Infeasible(std::to_string(violations.size()) +
                     " constraint violations, first: " + to_string(v.family) +
                     " by " + std::to_string(v.magnitude));
  }
  RoutingCost cost;
  for (std::size_t j = 0; j < problem.datacenters; ++j) {
    const std::vector<double> power = routed_power_kw(solution, problem, j);
    CostReport report =
        billing_cost(power, problem.tariffs[j], problem.slot_minutes);
    report.idle_kw = problem.power_models[j].idle_kw();
    cost.per_datacenter.push_back(report);
  }
  cost.total = sum_reports(cost.per_datacenter);
  return cost;
}

RoutingSolution route_closest(const RoutingProblem& problem) {
  problem.validate();
  const std::size_t J = problem.datacenters;
  RoutingSolution solution{AllocationTensor(problem.clients, J, problem.slots)};
  std::vector<std::vector<std::size_t>> preference(problem.clients);
  for (std::size_t i = 0; i < problem.clients; ++i) {
    preference[i].resize(J);
    std::iota(preference[i].begin(), preference[i].end(), std::size_t{0});
    std::stable_sort(preference[i].begin(), preference[i].end(),
                     [&](std::size_t a, std::size_t b) {
                       return problem.latency(i, a) < problem.latency(i, b);
                     });
  }
  std::vector<double> remaining(J);
  for (std::size_t t = 0; t < problem.slots; ++t) {
    for (std::size_t j = 0; j < J; ++j) remaining[j] = problem.capacity(j);
    for (std::size_t i = 0; i < problem.clients; ++i) {
      double left = problem.demand(i, t);
      for (std::size_t j : preference[i]) {
        if (left <= 0.0) break;
        const double take = std::min(left, remaining[j]);
        if (take <= 0.0) continue;
        solution.d.at(i, j, t) = take;
        remaining[j] -= take;
        left -= take;
      }
      if (left > 1e-9 * std::max(problem.demand(i, t), 1.0)) {
        throw Infeasible("closest routing ran out of capacity at slot " +
                         std::to_string(t));
      }
    }
  }
  return solution;
}

}  // namespace peakcut
