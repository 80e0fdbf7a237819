#include "peakcut/solver_data.hpp"

#include <algorithm>
#include <numeric>

namespace peakcut {

SolverData make_solver_data(const RoutingProblem& problem) {
  problem.validate();
  SolverData data;
  data.clients = problem.clients;
  data.datacenters = problem.datacenters;
  data.slots = problem.slots;
  data.demand = problem.client_demand;
  data.latency = problem.latency_ms;
  data.latency_bound = problem.latency_bound_ms;
  for (std::size_t j = 0; j < problem.datacenters; ++j) {
    data.capacity.push_back(problem.capacity(j));
    data.peak_coeff.push_back(problem.peak_coefficient(j));
    data.energy_coeff.push_back(problem.energy_coefficient(j));
  }
  return data;
}

Scaling natural_scaling(const SolverData& data) {
  Scaling scaling;
  const double total = std::accumulate(data.demand.begin(), data.demand.end(), 0.0);
  const double cells = static_cast<double>(data.clients * data.slots);
  if (total > 0.0) scaling.demand_unit = total / cells;

  // Price unit: half the largest peak coefficient. At the optimum the peak
  // term's multipliers reach a sizable fraction of c_j on the busiest slots,
  // and rho = 1 at this unit balanced primal and dual progress best on the
  // bundled instance. Without peak prices, the largest energy coefficient.
  double price = 0.0;
  for (std::size_t j = 0; j < data.datacenters; ++j) {
    price = std::max({price, 0.5 * data.peak_coeff[j], data.energy_coeff[j]});
  }
  if (price > 0.0) scaling.price_unit = price;
  return scaling;
}

SolverData rescale(const SolverData& data, const Scaling& scaling) {
  SolverData out = data;
  for (double& v : out.demand) v /= scaling.demand_unit;
  for (double& v : out.capacity) v /= scaling.demand_unit;
  for (double& v : out.peak_coeff) v /= scaling.price_unit;
  for (double& v : out.energy_coeff) v /= scaling.price_unit;
  return out;
}

}  // namespace peakcut
