#include "peakcut/subgradient.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "peakcut/error.hpp"
#include "peakcut/kernels.hpp"

namespace peakcut {

void SubgradientOptions::validate() const {
  if (!(rho > 0.0) || !(initial_step > 0.0)) {
    throw DomainError("rho and initial_step must be positive");
  }
  if (max_iterations < 1 || max_inner_sweeps < 1) {
    throw DomainError("iteration limits must be >= 1");
  }
  if (!(eps_abs > 0.0) || !(eps_rel > 0.0)) {
    throw DomainError("tolerances must be positive");
  }
  if (threads < 0) throw DomainError("threads must be >= 0");
}

SubgradientResult subgradient_solve(const RoutingProblem& problem,
                                    const SubgradientOptions& options) {
  options.validate();
  const SolverData raw = make_solver_data(problem);
  const Scaling scaling = options.normalize ? natural_scaling(raw) : Scaling{};
  const SolverData data = rescale(raw, scaling);

  AdmmState state(data.clients, data.datacenters, data.slots, options.rho);
  AllocationTensor best_b = state.b;
  double best_score = std::numeric_limits<double>::infinity();
  SubgradientResult result;
  const auto start = std::chrono::steady_clock::now();

  for (int k = 1; k <= options.max_iterations; ++k) {
    state.iteration = k;
    const AllocationTensor previous_b = state.b;
    const Thresholds outer =
        stopping_thresholds(state, options.eps_abs, options.eps_rel);
    const double inner_limit = 0.1 * std::min(outer.primal, outer.dual);

    // Joint minimization at fixed lambda, warm-started from the last iterate.
    int sweeps = 0;
    while (sweeps < options.max_inner_sweeps) {
      const AllocationTensor sweep_b = state.b;
      kernels::d_step(data, state, options.threads);
      kernels::b_step(data, state, options.threads);
      ++sweeps;
      if (residuals(state, sweep_b).dual <= inner_limit) break;
    }

    const double step = options.initial_step / static_cast<double>(k);
    kernels::dual_step(state, step, options.threads);
    result.steps.push_back(step);
    result.inner_sweeps.push_back(sweeps);

    const Residuals res = residuals(state, previous_b);
    const Thresholds limit =
        stopping_thresholds(state, options.eps_abs, options.eps_rel);
    IterationRecord record;
    record.iteration = k;
    record.primal = res.primal;
    record.dual = res.dual;
    record.objective = augmented_lagrangian(state, data) * scaling.cost_unit();
    record.ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
    result.log.records.push_back(record);

    const double score = std::max(res.primal / limit.primal, res.dual / limit.dual);
    if (score < best_score) {
      best_score = score;
      best_b = state.b;
    }
    result.iterations = k;
    if (res.primal <= limit.primal && res.dual <= limit.dual) {
      result.converged = true;
      best_b = state.b;
      break;
    }
  }
  if (!result.converged) {
    result.warning = "subgradient stopped at max_iterations=" +
                     std::to_string(options.max_iterations) +
                     " without meeting the residual tolerances";
  }
  restore_capacity(data, best_b);
  for (double& v : best_b.flat()) v *= scaling.demand_unit;
  result.solution.d = std::move(best_b);
  return result;
}

}  // namespace peakcut
