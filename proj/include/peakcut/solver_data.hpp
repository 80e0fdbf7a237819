#pragma once

#include <cstddef>
#include <vector>

#include "peakcut/routing.hpp"

namespace peakcut {

// Flat numeric view of a RoutingProblem as seen by the ADMM kernels: prices
// collapsed to $ per request and capacities to requests per slot.
struct SolverData {
  std::size_t clients = 0;
  std::size_t datacenters = 0;
  std::size_t slots = 0;
  std::vector<double> demand;        // [i][t]
  std::vector<double> latency;       // [i][j]
  double latency_bound = 0.0;
  std::vector<double> capacity;      // [j]
  std::vector<double> peak_coeff;    // c_j
  std::vector<double> energy_coeff;  // e_j

  double demand_at(std::size_t i, std::size_t t) const {
    return demand[i * slots + t];
  }
  const double* latency_row(std::size_t i) const {
    return latency.data() + i * datacenters;
  }
  std::size_t cells() const { return clients * datacenters * slots; }
};

SolverData make_solver_data(const RoutingProblem& problem);

// Change of units: allocations are divided by demand_unit and prices by
// price_unit, so objective values are divided by demand_unit * price_unit.
// A fixed penalty rho then means the same thing regardless of how many
// requests a client sends or how expensive power is.
struct Scaling {
  double demand_unit = 1.0;
  double price_unit = 1.0;
  double cost_unit() const { return demand_unit * price_unit; }
};

Scaling natural_scaling(const SolverData& data);
SolverData rescale(const SolverData& data, const Scaling& scaling);

}  // namespace peakcut
