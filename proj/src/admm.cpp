#include "peakcut/admm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "peakcut/error.hpp"
#include "peakcut/kernels.hpp"
#include "peakcut/subproblems.hpp"

namespace peakcut {

namespace {

double norm2(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

std::string format_g9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

void AdmmOptions::validate() const {
  if (!(rho > 0.0)) throw DomainError("rho must be positive");
  if (max_iterations < 1) throw DomainError("max_iterations must be >= 1");
  if (!(eps_abs > 0.0) || !(eps_rel > 0.0)) {
    throw DomainError("tolerances must be positive");
  }
  if (threads < 0) throw DomainError("threads must be >= 0");
}

void ConvergenceLog::write_csv(std::ostream& out, bool include_timing) const {
  out << "iteration,primal,dual,objective" << (include_timing ? ",ms" : "")
      << "\n";
  for (const IterationRecord& r : records) {
    out << r.iteration << ',' << format_g9(r.primal) << ','
        << format_g9(r.dual) << ',' << format_g9(r.objective);
    if (include_timing) out << ',' << format_g9(r.ms);
    out << '\n';
  }
}

double augmented_lagrangian(const AdmmState& state, const SolverData& data) {
  double value = 0.0;
  for (std::size_t j = 0; j < data.datacenters; ++j) {
    double peak = 0.0;
    for (std::size_t t = 0; t < data.slots; ++t) {
      double load = 0.0;
      for (double v : state.d.column(j, t)) load += v;
      peak = std::max(peak, load);
    }
    value += data.peak_coeff[j] * peak;
    for (double v : state.b.block(j)) value += data.energy_coeff[j] * v;
  }
  const auto d = state.d.flat();
  const auto b = state.b.flat();
  const auto lambda = state.lambda.flat();
  for (std::size_t k = 0; k < d.size(); ++k) {
    const double gap = d[k] - b[k];
    value += lambda[k] * gap + 0.5 * state.rho * gap * gap;
  }
  return value;
}

void dual_update(AdmmState& state) {
  kernels::serial::dual_step(state, state.rho);
}

Residuals residuals(const AdmmState& state,
                    const AllocationTensor& previous_b) {
  const auto d = state.d.flat();
  const auto b = state.b.flat();
  const auto prev = previous_b.flat();
  double primal = 0.0;
  double dual = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    primal += (d[k] - b[k]) * (d[k] - b[k]);
    dual += (b[k] - prev[k]) * (b[k] - prev[k]);
  }
  return {std::sqrt(primal), state.rho * std::sqrt(dual)};
}

Thresholds stopping_thresholds(const AdmmState& state, double eps_abs,
                               double eps_rel) {
  const double root_n = std::sqrt(static_cast<double>(state.d.size()));
  const double primal_scale = std::max(norm2(state.d.flat()), norm2(state.b.flat()));
  return {root_n * eps_abs + eps_rel * primal_scale,
          root_n * eps_abs + eps_rel * norm2(state.lambda.flat())};
}

double solve_per_dc(std::size_t j, AdmmState& state, const SolverData& data) {
  DcSubproblemInput in;
  in.clients = data.clients;
  in.slots = data.slots;
  in.targets = state.b.block(j);
  in.duals = state.lambda.block(j);
  in.rho = state.rho;
  in.peak_coeff = data.peak_coeff[j];
  in.cap = data.capacity[j];
  return solve_per_dc(in, state.d.block(j));
}

void restore_capacity(const SolverData& data, AllocationTensor& b,
                      double relative_tolerance) {
  AdmmState work(data.clients, data.datacenters, data.slots, 1.0);
  SolverData plain = data;
  std::fill(plain.energy_coeff.begin(), plain.energy_coeff.end(), 0.0);
  work.b = b;
  std::vector<double> zeros(data.clients, 0.0);
  for (int round = 0; round < 1000; ++round) {
    double worst = 0.0;
    for (std::size_t j = 0; j < data.datacenters; ++j) {
      for (std::size_t t = 0; t < data.slots; ++t) {
        double load = 0.0;
        for (double v : work.b.column(j, t)) load += v;
        worst = std::max(worst, (load - data.capacity[j]) /
                                    std::max(data.capacity[j], 1e-300));
      }
    }
    if (worst <= relative_tolerance) break;
    // Capacity projection into d, then client projection back into b.
    for (std::size_t j = 0; j < data.datacenters; ++j) {
      for (std::size_t t = 0; t < data.slots; ++t) {
        SlotProjectionInput in{work.b.column(j, t), zeros, 1.0, data.capacity[j]};
        slot_projection(in, work.d.column(j, t));
      }
    }
    kernels::serial::b_step(plain, work);
  }
  b = std::move(work.b);
}

AdmmResult admm_solve(const RoutingProblem& problem,
                      const AdmmOptions& options) {
  options.validate();
  const SolverData raw = make_solver_data(problem);
  const Scaling scaling = options.normalize ? natural_scaling(raw) : Scaling{};
  const SolverData data = rescale(raw, scaling);

  AdmmState state(data.clients, data.datacenters, data.slots, options.rho);
  AllocationTensor best_b = state.b;
  double best_score = std::numeric_limits<double>::infinity();
  AdmmResult result;
  const auto start = std::chrono::steady_clock::now();

  for (int k = 1; k <= options.max_iterations; ++k) {
    state.iteration = k;
    const AllocationTensor previous_b = state.b;

    double before = options.check_descent ? augmented_lagrangian(state, data) : 0.0;
    kernels::d_step(data, state, options.threads);
    if (options.check_descent) {
      const double after = augmented_lagrangian(state, data);
      if (after > before + 1e-9 * std::max(1.0, std::abs(before))) {
        throw std::logic_error("d-step increased the augmented Lagrangian");
      }
      before = after;
    }
    kernels::b_step(data, state, options.threads);
    // b starts at 0, outside the client constraint set, so the first b-step
    // may raise the value.
    if (options.check_descent && k > 1) {
      const double after = augmented_lagrangian(state, data);
      if (after > before + 1e-9 * std::max(1.0, std::abs(before))) {
        throw std::logic_error("b-step increased the augmented Lagrangian");
      }
    }
    kernels::dual_step(state, state.rho, options.threads);

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
    result.warning = "ADMM stopped at max_iterations=" +
                     std::to_string(options.max_iterations) +
                     " without meeting the residual tolerances";
  }

  restore_capacity(data, best_b);
  for (double& v : best_b.flat()) v *= scaling.demand_unit;
  result.solution.d = std::move(best_b);
  return result;
}

}  // namespace peakcut
