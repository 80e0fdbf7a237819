#include "peakcut/pipeline.hpp"

namespace peakcut {

PipelineResult solve_pipeline(const RoutingProblem& problem,
                              const AdmmOptions& options) {
  PipelineResult result;
  result.routing = admm_solve(problem, options);
  result.routing_cost = routing_objective(result.routing.solution, problem);

  std::vector<CostReport> reports;
  double demand = 0.0;
  double high_demand = 0.0;
  for (std::size_t j = 0; j < problem.datacenters; ++j) {
    const DemandTrace load = aggregate_trace(result.routing.solution, problem, j);
    result.schedules.push_back(schedule_greedy(
        load, problem.sla, problem.tariffs[j], problem.power_models[j]));
    reports.push_back(result.schedules.back().cost);
    demand += load.total();
    high_demand += load.total() * (1.0 - result.schedules.back().low_mode_demand_fraction);
  }
  result.total = sum_reports(reports);
  result.total.sla_attainment = demand > 0.0 ? high_demand / demand : 1.0;
  return result;
}

AdmmResult baseline_energy_only(const RoutingProblem& problem,
                                const AdmmOptions& options) {
  RoutingProblem copy = problem;
  for (Tariff& tariff : copy.tariffs) tariff.demand_price_usd_per_kw = 0.0;
  return admm_solve(copy, options);
}

AdmmResult baseline_demand_only(const RoutingProblem& problem,
                                const AdmmOptions& options) {
  RoutingProblem copy = problem;
  for (Tariff& tariff : copy.tariffs) tariff.energy_price_usd_per_kwh = 0.0;
  return admm_solve(copy, options);
}

}  // namespace peakcut
