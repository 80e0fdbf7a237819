#pragma once

#include <span>

#include "peakcut/admm.hpp"
#include "peakcut/solver_data.hpp"
#include "peakcut/subproblems.hpp"

namespace peakcut::kernels::detail {

inline DcSubproblemInput dc_input(const SolverData& data,
                                  const AdmmState& state, std::size_t j) {
  DcSubproblemInput in;
  in.clients = data.clients;
  in.slots = data.slots;
  in.targets = state.b.block(j);
  in.duals = state.lambda.block(j);
  in.rho = state.rho;
  in.peak_coeff = data.peak_coeff[j];
  in.cap = data.capacity[j];
  return in;
}

// Per-thread gather buffers for one (client, slot) projection.
struct ClientScratch {
  std::vector<double> anchors, duals, out;
  explicit ClientScratch(std::size_t datacenters)
      : anchors(datacenters), duals(datacenters), out(datacenters) {}
};

inline void project_client(const SolverData& data, AdmmState& state,
                           std::size_t i, std::size_t t,
                           ClientScratch& scratch) {
  const std::size_t J = data.datacenters;
  for (std::size_t j = 0; j < J; ++j) {
    scratch.anchors[j] = state.d.at(i, j, t);
    scratch.duals[j] = state.lambda.at(i, j, t);
  }
  UserProjectionInput in;
  in.anchors = scratch.anchors;
  in.duals = scratch.duals;
  in.energy_coeffs = data.energy_coeff;
  in.latencies = std::span<const double>(data.latency_row(i), J);
  in.rho = state.rho;
  in.demand = data.demand_at(i, t);
  in.latency_bound = data.latency_bound;
  solve_per_user(in, scratch.out);
  for (std::size_t j = 0; j < J; ++j) state.b.at(i, j, t) = scratch.out[j];
}

}  // namespace peakcut::kernels::detail
