#include "peakcut/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "peakcut/error.hpp"

namespace peakcut {

namespace {

constexpr double kSlaSlack = 1e-9;

// Walks `order`, dropping each slot to low mode while the SLA holds.
Schedule trial_in_order(const DemandTrace& trace, const SlaPolicy& policy,
                        const std::vector<std::size_t>& order) {
  Schedule schedule = Schedule::all_high(trace.size());
  const double total = trace.total();
  const double floor = policy.percentile() * total - kSlaSlack * total;
  double high = total;
  for (std::size_t t : order) {
    if (high - trace[t] >= floor) {
      schedule.modes[t] = 0;
      high -= trace[t];
    }
  }
  return schedule;
}

double low_fraction(const Schedule& schedule, const DemandTrace& trace) {
  double low = 0.0;
  for (std::size_t t = 0; t < trace.size(); ++t) {
    if (!schedule.modes[t]) low += trace[t];
  }
  const double total = trace.total();
  return total > 0.0 ? low / total : 0.0;
}

ScheduleResult finish(Schedule schedule, const DemandTrace& trace) {
  ScheduleResult result;
  result.low_mode_demand_fraction = low_fraction(schedule, trace);
  result.cost.sla_attainment = 1.0 - result.low_mode_demand_fraction;
  result.schedule = std::move(schedule);
  return result;
}

ScheduleResult finish(Schedule schedule, const DemandTrace& trace,
                      const SlaPolicy& policy, const Tariff& tariff,
                      const PowerModel& model) {
  ScheduleResult result = finish(std::move(schedule), trace);
  result.cost = evaluate_schedule(result.schedule, trace, policy, tariff, model);
  return result;
}

std::vector<std::size_t> descending_demand_order(const DemandTrace& trace) {
  std::vector<std::size_t> order(trace.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return trace[a] > trace[b];
                   });
  return order;
}

}  // namespace

ScheduleResult schedule_greedy(const DemandTrace& trace,
                               const SlaPolicy& policy) {
  return finish(trial_in_order(trace, policy, descending_demand_order(trace)),
                trace);
}

ScheduleResult schedule_greedy(const DemandTrace& trace,
                               const SlaPolicy& policy, const Tariff& tariff,
                               const PowerModel& model) {
  return finish(trial_in_order(trace, policy, descending_demand_order(trace)),
                trace, policy, tariff, model);
}

ScheduleResult schedule_random(const DemandTrace& trace,
                               const SlaPolicy& policy, std::uint64_t seed) {
  std::vector<std::size_t> order(trace.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return finish(trial_in_order(trace, policy, order), trace);
}

ScheduleResult schedule_random(const DemandTrace& trace,
                               const SlaPolicy& policy, std::uint64_t seed,
                               const Tariff& tariff, const PowerModel& model) {
  ScheduleResult result = schedule_random(trace, policy, seed);
  result.cost = evaluate_schedule(result.schedule, trace, policy, tariff, model);
  return result;
}

ScheduleResult schedule_bruteforce(const DemandTrace& trace,
                                   const SlaPolicy& policy,
                                   const Tariff& tariff,
                                   const PowerModel& model) {
  const std::size_t slots = trace.size();
  if (slots > kMaxBruteforceSlots) {
    throw TooLarge("brute-force scheduling supports at most " +
                   std::to_string(kMaxBruteforceSlots) + " slots");
  }
  const double total = trace.total();
  const double floor = policy.percentile() * total - kSlaSlack * total;
  std::vector<double> high_kw(slots);
  std::vector<double> low_kw(slots);
  for (std::size_t t = 0; t < slots; ++t) {
    high_kw[t] = dynamic_power_kw(policy.high_alpha(), trace[t], model);
    low_kw[t] = dynamic_power_kw(policy.low_alpha(), trace[t], model);
  }
  const double slot_hours = trace.slot_hours();

  // Codes enumerate schedules in lexicographic order (slot 0 is the most
  // significant bit), so keeping the first strict improvement breaks ties
  // toward the lexicographically smallest schedule.
  const std::uint64_t count = std::uint64_t{1} << slots;
  std::uint64_t best_code = count - 1;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::uint64_t code = 0; code < count; ++code) {
    double high = 0.0;
    double peak = 0.0;
    double energy = 0.0;
    for (std::size_t t = 0; t < slots; ++t) {
      const bool is_high = (code >> (slots - 1 - t)) & 1U;
      const double p = is_high ? high_kw[t] : low_kw[t];
      if (is_high) high += trace[t];
      peak = std::max(peak, p);
      energy += p;
    }
    if (high < floor) continue;
    const double cost = peak * tariff.demand_price_usd_per_kw +
                        energy * slot_hours * tariff.energy_price_usd_per_kwh;
    if (!std::isfinite(best_cost) || cost < best_cost - 1e-12 * std::abs(best_cost)) {
      best_cost = cost;
      best_code = code;
    }
  }
  Schedule schedule = Schedule::all_high(slots);
  for (std::size_t t = 0; t < slots; ++t) {
    schedule.modes[t] = (best_code >> (slots - 1 - t)) & 1U;
  }
  return finish(std::move(schedule), trace, policy, tariff, model);
}

std::vector<double> schedule_power_kw(const Schedule& schedule,
                                      const DemandTrace& trace,
                                      const SlaPolicy& policy,
                                      const PowerModel& model) {
  if (schedule.size() != trace.size()) {
    throw LengthMismatch("schedule and trace lengths differ");
  }
  std::vector<double> power(trace.size());
  for (std::size_t t = 0; t < trace.size(); ++t) {
    const double alpha =
        schedule.modes[t] ? policy.high_alpha() : policy.low_alpha();
    power[t] = dynamic_power_kw(alpha, trace[t], model);
  }
  return power;
}

CostReport evaluate_schedule(const Schedule& schedule, const DemandTrace& trace,
                             const SlaPolicy& policy, const Tariff& tariff,
                             const PowerModel& model) {
  if (!sla_satisfied(schedule, trace, policy)) {
    throw SlaViolated("schedule violates the percentile SLA");
  }
  const std::vector<double> power =
      schedule_power_kw(schedule, trace, policy, model);
  CostReport report = billing_cost(power, tariff, trace.slot_minutes());
  report.sla_attainment = 1.0 - low_fraction(schedule, trace);
  report.idle_kw = model.idle_kw();
  return report;
}

DemandTrace concatenate(const std::vector<DemandTrace>& traces) {
  if (traces.empty()) throw DomainError("no traces to concatenate");
  std::vector<double> all;
  for (const DemandTrace& day : traces) {
    if (day.slot_minutes() != traces.front().slot_minutes()) {
      throw DomainError("traces use different slot lengths");
    }
    all.insert(all.end(), day.values().begin(), day.values().end());
  }
  return DemandTrace(std::move(all), traces.front().slot_minutes());
}

ScheduleResult schedule_horizon(const std::vector<DemandTrace>& daily_traces,
                                const SlaPolicy& policy, const Tariff& tariff,
                                const PowerModel& model, HorizonMode mode) {
  const DemandTrace month = concatenate(daily_traces);
  if (mode == HorizonMode::kWholeHorizon) {
    return schedule_greedy(month, policy, tariff, model);
  }
  Schedule schedule;
  for (const DemandTrace& day : daily_traces) {
    const Schedule daily = schedule_greedy(day, policy).schedule;
    schedule.modes.insert(schedule.modes.end(), daily.modes.begin(),
                          daily.modes.end());
  }
  return finish(std::move(schedule), month, policy, tariff, model);
}

}  // namespace peakcut
