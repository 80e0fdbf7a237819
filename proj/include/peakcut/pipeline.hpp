#pragma once

// Route first (all datacenters in high mode), then schedule partial execution
// per datacenter on the routed aggregate load.

#include <vector>

#include "peakcut/admm.hpp"
#include "peakcut/routing.hpp"
#include "peakcut/scheduler.hpp"

namespace peakcut {

struct PipelineResult {
  AdmmResult routing;
  RoutingCost routing_cost;                // routed, all slots high
  std::vector<ScheduleResult> schedules;   // one per datacenter
  CostReport total;                        // routed + scheduled
};

PipelineResult solve_pipeline(const RoutingProblem& problem,
                              const AdmmOptions& options = {});

// ADMM on a copy with every demand price zeroed; bill the result with the
// real tariffs via routing_objective.
AdmmResult baseline_energy_only(const RoutingProblem& problem,
                                const AdmmOptions& options = {});
// ADMM on a copy with every energy price zeroed.
AdmmResult baseline_demand_only(const RoutingProblem& problem,
                                const AdmmOptions& options = {});

}  // namespace peakcut
