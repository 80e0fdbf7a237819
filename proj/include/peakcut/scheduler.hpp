#pragma once

// Single-datacenter partial-execution scheduling: which slots run in the low
// power mode while the percentile SLA still holds.

#include <cstdint>
#include <vector>

#include "peakcut/model.hpp"

namespace peakcut {

struct ScheduleResult {
  Schedule schedule;
  CostReport cost;
  double low_mode_demand_fraction = 0.0;
};

// Largest demand first, ties by earliest slot; each slot drops to low mode iff
// the SLA still holds. Without a tariff only cost.sla_attainment is filled.
ScheduleResult schedule_greedy(const DemandTrace& trace,
                               const SlaPolicy& policy);
ScheduleResult schedule_greedy(const DemandTrace& trace,
                               const SlaPolicy& policy, const Tariff& tariff,
                               const PowerModel& model);

// Exhaustive optimum over all 2^T schedules; T <= kMaxBruteforceSlots.
inline constexpr std::size_t kMaxBruteforceSlots = 22;
ScheduleResult schedule_bruteforce(const DemandTrace& trace,
                                   const SlaPolicy& policy,
                                   const Tariff& tariff,
                                   const PowerModel& model);

// Same trial rule as greedy, over a uniformly shuffled slot order.
ScheduleResult schedule_random(const DemandTrace& trace,
                               const SlaPolicy& policy, std::uint64_t seed);
ScheduleResult schedule_random(const DemandTrace& trace,
                               const SlaPolicy& policy, std::uint64_t seed,
                               const Tariff& tariff, const PowerModel& model);

// Bills a schedule: alpha_hi where X = 1, alpha_lo where X = 0.
CostReport evaluate_schedule(const Schedule& schedule, const DemandTrace& trace,
                             const SlaPolicy& policy, const Tariff& tariff,
                             const PowerModel& model);

// Power series (kW, no idle) induced by a schedule.
std::vector<double> schedule_power_kw(const Schedule& schedule,
                                      const DemandTrace& trace,
                                      const SlaPolicy& policy,
                                      const PowerModel& model);

enum class HorizonMode {
  kPerDay,        // greedy per day, billed over the concatenated horizon
  kWholeHorizon,  // greedy once over the whole horizon (perfect foresight)
};

ScheduleResult schedule_horizon(const std::vector<DemandTrace>& daily_traces,
                                const SlaPolicy& policy, const Tariff& tariff,
                                const PowerModel& model, HorizonMode mode);

DemandTrace concatenate(const std::vector<DemandTrace>& traces);

}  // namespace peakcut
