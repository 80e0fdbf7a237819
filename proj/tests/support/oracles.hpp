#pragma once

// Independent reference computations for the test suites. Nothing here calls
// the solvers under test; model arithmetic is re-derived from the formulas.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "peakcut/model.hpp"
#include "peakcut/routing.hpp"

namespace oracle {

// Q^{-1} by plain bisection on [0, 1].
double quality_inverse(double q, double c2, double c1, double c0);

// kW drawn by `requests` per slot at completion ratio alpha.
double power_kw(double alpha, double requests, double idle_w, double peak_w,
                double per_server_slot);

struct Bill {
  double peak_kw = 0.0;
  double demand_usd = 0.0;
  double energy_usd = 0.0;
  double total() const { return demand_usd + energy_usd; }
};
Bill bill(std::span<const double> kw, double demand_price, double energy_price,
          double slot_hours);

// Exhaustive single-DC schedule search by recursion over slots. Returns the
// minimum bill over SLA-feasible schedules (same 1e-9 slack) and one argmin.
struct ScheduleOptimum {
  std::vector<std::uint8_t> modes;
  double cost = 0.0;
};
ScheduleOptimum best_schedule(std::span<const double> demand, double percentile,
                              double alpha_hi, double alpha_lo, const peakcut::Tariff& tariff,
                              const peakcut::PowerModel& model, double slot_hours);

// Minimize a function over a box by repeated grid refinement. `feasible`
// filters points; returns the best value found (x written to `best`).
double zoom_minimize(const std::function<double(std::span<const double>)>& f,
                     const std::function<bool(std::span<const double>)>& feasible,
                     std::vector<double> lo, std::vector<double> hi,
                     std::vector<double>& best, int points = 41, int rounds = 60);

// min over d >= 0, sum d <= cap of sum rho/2 (d - b)^2 + lambda d, by
// enumerating active sets (n <= 12).
double slot_projection_min(std::span<const double> b, std::span<const double> lambda,
                           double rho, double cap);

// min over b >= 0, sum b = D, sum b L <= bound D of
// sum rho/2 (b - d)^2 + (e - lambda) b, by enumerating active sets (J <= 12).
double user_projection_min(std::span<const double> anchors, std::span<const double> duals,
                           std::span<const double> energy, std::span<const double> latency,
                           double rho, double demand, double bound);

// Per-DC subproblem value at a fixed peak m, solved slot by slot with a
// nu-bisection written from the KKT conditions.
double dc_value_at_peak(std::span<const double> targets, std::span<const double> duals,
                        std::size_t clients, std::size_t slots, double rho, double peak_coeff,
                        double cap, double m);
// min over m of the above: a 10^4-point grid, then golden section.
double dc_subproblem_min(std::span<const double> targets, std::span<const double> duals,
                         std::size_t clients, std::size_t slots, double rho, double peak_coeff,
                         double cap);

// Routing optimum for J <= 2 (any I, T). With two datacenters the bill only
// depends on S_t, the load sent to the first one, and each client's share
// ranges over a latency-feasible interval. For fixed peaks (m1, m2) the best
// S_t is an interval endpoint, so the optimum is a 2-D convex search.
double routing_optimum(const peakcut::RoutingProblem& problem);

}  // namespace oracle
