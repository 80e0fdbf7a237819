#pragma once

// Exact solvers for the two block minimizations of the routing augmented
// Lagrangian. Both reduce to thresholded (water-filling) solutions of the
// form x = max(target - level, 0) with the level fixed by a budget.

#include <span>
#include <vector>

namespace peakcut {

// min sum_i (rho/2)(d_i - b_i)^2 + lambda_i d_i  s.t.  d >= 0, sum d <= cap.
struct SlotProjectionInput {
  std::span<const double> targets;  // b_i
  std::span<const double> duals;    // lambda_i
  double rho = 1.0;
  double cap = 0.0;
};

void slot_projection(const SlotProjectionInput& in, std::span<double> out);
std::vector<double> slot_projection(const SlotProjectionInput& in);
double slot_objective(const SlotProjectionInput& in, std::span<const double> d);

// One client in one slot:
// min sum_j (rho/2)(b_j - d_j)^2 - lambda_j b_j + e_j b_j
// s.t. sum b = D, sum b_j L_j <= bound * D, b >= 0.
struct UserProjectionInput {
  std::span<const double> anchors;        // d_j
  std::span<const double> duals;          // lambda_j
  std::span<const double> energy_coeffs;  // e_j, $ per request
  std::span<const double> latencies;      // L_ij
  double rho = 1.0;
  double demand = 0.0;
  double latency_bound = 0.0;
};

// Throws Infeasible when no datacenter is within the bound and demand > 0.
void solve_per_user(const UserProjectionInput& in, std::span<double> out);
std::vector<double> solve_per_user(const UserProjectionInput& in);
double user_objective(const UserProjectionInput& in, std::span<const double> b);

// One datacenter over all slots:
// min c max_t S_t + sum_{i,t} lambda d + (rho/2)(d - b)^2
// s.t. d >= 0, S_t = sum_i d_it <= cap.
// targets/duals/out are slot-major [t][i], matching AllocationTensor::block.
struct DcSubproblemInput {
  std::size_t clients = 0;
  std::size_t slots = 0;
  std::span<const double> targets;
  std::span<const double> duals;
  double rho = 1.0;
  double peak_coeff = 0.0;  // c_j
  double cap = 0.0;
};

// Returns the optimal peak level m (the epigraph variable).
double solve_per_dc(const DcSubproblemInput& in, std::span<double> out);
double dc_objective(const DcSubproblemInput& in, std::span<const double> d);

}  // namespace peakcut
