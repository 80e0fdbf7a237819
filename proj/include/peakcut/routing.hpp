#pragma once

// Geo-distributed request routing: splitting every client's demand across
// datacenters under conservation, average-latency and capacity constraints,
// billed by each datacenter's two-part tariff with all slots in high mode.

#include <string>
#include <vector>

#include "peakcut/model.hpp"
#include "peakcut/tensor.hpp"

namespace peakcut {

struct RoutingProblem {
  std::size_t clients = 0;
  std::size_t datacenters = 0;
  std::size_t slots = 0;
  int slot_minutes = 15;
  std::vector<double> client_demand;  // requests/slot, client-major [i][t]
  std::vector<double> latency_ms;     // client-major [i][j]
  double latency_bound_ms = 0.0;
  std::vector<std::string> datacenter_names;
  std::vector<Tariff> tariffs;
  std::vector<PowerModel> power_models;
  SlaPolicy sla;

  double demand(std::size_t i, std::size_t t) const {
    return client_demand[i * slots + t];
  }
  double latency(std::size_t i, std::size_t j) const {
    return latency_ms[i * datacenters + j];
  }
  double capacity(std::size_t j) const { return power_models[j].capacity(); }
  double slot_hours() const { return slot_minutes / 60.0; }
  // Completion ratio applied to all routed load (every slot in high mode).
  double routing_alpha() const { return sla.high_alpha(); }
  // $ per request of peak aggregate load at datacenter j.
  double peak_coefficient(std::size_t j) const;
  // $ per request served at datacenter j.
  double energy_coefficient(std::size_t j) const;
  double total_demand(std::size_t t) const;

  // Throws DomainError on malformed data and Infeasible when a client has no
  // datacenter within the latency bound or a slot exceeds total capacity.
  void validate() const;
};

struct RoutingSolution {
  AllocationTensor d;
};

struct Violation {
  enum class Family { kConservation, kLatency, kCapacity, kNegativity };
  Family family;
  long client = -1;
  long datacenter = -1;
  long slot = -1;
  double magnitude = 0.0;
};

std::string to_string(Violation::Family family);

inline constexpr double kFeasibilityTolerance = 1e-6;

// Every constraint violation beyond `relative_tolerance` (relative to the
// constraint's right-hand side, floored at one request).
std::vector<Violation> check_feasible(
    const RoutingSolution& solution, const RoutingProblem& problem,
    double relative_tolerance = kFeasibilityTolerance);

struct RoutingCost {
  std::vector<CostReport> per_datacenter;
  CostReport total;  // sums; total.peak_kw is the sum of per-DC peaks
};

// Aggregate load routed to datacenter j, per slot.
DemandTrace aggregate_trace(const RoutingSolution& solution,
                            const RoutingProblem& problem, std::size_t j);

// Power series at the problem's routing alpha for datacenter j.
std::vector<double> routed_power_kw(const RoutingSolution& solution,
                                    const RoutingProblem& problem,
                                    std::size_t j);

// Throws Infeasible when check_feasible reports violations.
RoutingCost routing_objective(const RoutingSolution& solution,
                              const RoutingProblem& problem);

// Each client to its lowest-latency datacenter, spilling in ascending latency
// order (ties by index) when capacity runs out. Clients are served in index
// order within a slot.
RoutingSolution route_closest(const RoutingProblem& problem);

// Sums per-DC reports into a total.
CostReport sum_reports(const std::vector<CostReport>& reports);

}  // namespace peakcut
