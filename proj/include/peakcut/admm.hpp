#pragma once

// Consensus ADMM for the routing problem. The allocation is duplicated into
// d (owned by datacenters, carries the peak charge and capacity) and b (owned
// by clients, carries the energy charge, conservation and latency), coupled
// by d = b with multipliers lambda.

#include <iosfwd>
#include <string>
#include <vector>

#include "peakcut/routing.hpp"
#include "peakcut/solver_data.hpp"
#include "peakcut/tensor.hpp"

namespace peakcut {

struct AdmmOptions {
  double rho = 1.0;
  int max_iterations = 200;
  double eps_abs = 1e-6;
  double eps_rel = 1e-4;
  // 1 runs the serial reference kernels; 0 lets OpenMP pick.
  int threads = 0;
  // Work in normalized units (see Scaling). rho and the tolerances then
  // apply to the normalized problem.
  bool normalize = true;
  // Assert that each block step does not increase the augmented Lagrangian.
  bool check_descent = false;

  void validate() const;
};

struct AdmmState {
  AllocationTensor d;
  AllocationTensor b;
  AllocationTensor lambda;
  double rho = 1.0;
  int iteration = 0;

  AdmmState() = default;
  AdmmState(std::size_t clients, std::size_t datacenters, std::size_t slots,
            double rho_)
      : d(clients, datacenters, slots),
        b(clients, datacenters, slots),
        lambda(clients, datacenters, slots),
        rho(rho_) {}
};

struct IterationRecord {
  int iteration = 0;
  double primal = 0.0;
  double dual = 0.0;
  double objective = 0.0;  // augmented Lagrangian, $
  double ms = 0.0;
};

struct ConvergenceLog {
  std::vector<IterationRecord> records;

  std::size_t size() const { return records.size(); }
  // Columns: iteration,primal,dual,objective[,ms]. Timing is optional so that
  // reproducible runs can emit byte-identical files.
  void write_csv(std::ostream& out, bool include_timing = true) const;
};

struct Residuals {
  double primal = 0.0;
  double dual = 0.0;
};

struct AdmmResult {
  RoutingSolution solution;
  ConvergenceLog log;
  bool converged = false;
  int iterations = 0;
  std::string warning;
};

// L_rho(d, b, lambda) in the units of `data`.
double augmented_lagrangian(const AdmmState& state, const SolverData& data);

// lambda += rho (d - b).
void dual_update(AdmmState& state);

// primal = ||d - b||_2, dual = rho ||b - previous_b||_2.
Residuals residuals(const AdmmState& state, const AllocationTensor& previous_b);

// Stopping thresholds for n = I J T variables.
struct Thresholds {
  double primal;
  double dual;
};
Thresholds stopping_thresholds(const AdmmState& state, double eps_abs,
                               double eps_rel);

// Per-datacenter block step for datacenter j: reads b and lambda, writes d.
double solve_per_dc(std::size_t j, AdmmState& state, const SolverData& data);

// Moves b, by alternating projections between the client constraint set and
// the capacity set, until capacity holds to `relative_tolerance`.
// Conservation and latency hold exactly on return.
void restore_capacity(const SolverData& data, AllocationTensor& b,
                      double relative_tolerance = 1e-9);

// Hitting max_iterations is not an exception: `converged` stays false,
// `warning` is set and the iterate closest to the stopping rule is returned.
AdmmResult admm_solve(const RoutingProblem& problem,
                      const AdmmOptions& options = {});

}  // namespace peakcut
