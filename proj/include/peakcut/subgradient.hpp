#pragma once

// Dual subgradient ascent on the same augmented Lagrangian: at each outer
// iteration (d, b) are minimized jointly at fixed lambda, then lambda moves
// along d - b with a diminishing step initial_step / k.

#include <vector>

#include "peakcut/admm.hpp"

namespace peakcut {

struct SubgradientOptions {
  double rho = 1.0;  // penalty inside the augmented Lagrangian
  double initial_step = 1.0;
  int max_iterations = 500;
  double eps_abs = 1e-6;
  double eps_rel = 1e-4;
  // Cap on block-coordinate sweeps used for each joint minimization.
  int max_inner_sweeps = 50;
  int threads = 0;
  bool normalize = true;

  void validate() const;
};

struct SubgradientResult {
  RoutingSolution solution;
  ConvergenceLog log;
  std::vector<double> steps;        // step used at outer iteration k
  std::vector<int> inner_sweeps;    // sweeps spent at outer iteration k
  bool converged = false;
  int iterations = 0;
  std::string warning;
};

SubgradientResult subgradient_solve(const RoutingProblem& problem,
                                    const SubgradientOptions& options = {});

}  // namespace peakcut
