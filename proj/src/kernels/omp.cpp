#include <omp.h>

#include <exception>

#include "cells.hpp"
#include "peakcut/kernels.hpp"

namespace peakcut::kernels::omp {

namespace {

int team_size(int threads) {
  return threads > 0 ? threads : omp_get_max_threads();
}

// Exceptions must not escape a parallel region; the first one is kept and
// rethrown after the barrier.
class FirstError {
 public:
  template <class F>
  void run(F&& f) {
    try {
      f();
    } catch (...) {
#pragma omp critical(peakcut_first_error)
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::exception_ptr error_;
};

}  // namespace

void d_step(const SolverData& data, AdmmState& state, int threads) {
  const long J = static_cast<long>(data.datacenters);
  FirstError error;
#pragma omp parallel for schedule(dynamic, 1) num_threads(team_size(threads))
  for (long j = 0; j < J; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    error.run([&] {
      solve_per_dc(detail::dc_input(data, state, jj), state.d.block(jj));
    });
  }
  error.rethrow();
}

void b_step(const SolverData& data, AdmmState& state, int threads) {
  const long cells = static_cast<long>(data.clients * data.slots);
  const std::size_t T = data.slots;
  FirstError error;
#pragma omp parallel num_threads(team_size(threads))
  {
    detail::ClientScratch scratch(data.datacenters);
#pragma omp for schedule(static)
    for (long k = 0; k < cells; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      error.run([&] { detail::project_client(data, state, kk / T, kk % T, scratch); });
    }
  }
  error.rethrow();
}

void dual_step(AdmmState& state, double step, int threads) {
  auto lambda = state.lambda.flat();
  const auto d = state.d.flat();
  const auto b = state.b.flat();
  const long n = static_cast<long>(lambda.size());
#pragma omp parallel for schedule(static) num_threads(team_size(threads))
  for (long k = 0; k < n; ++k) {
    lambda[k] += step * (d[k] - b[k]);
  }
}

}  // namespace peakcut::kernels::omp

namespace peakcut::kernels {

void d_step(const SolverData& data, AdmmState& state, int threads) {
  if (threads == 1) {
    serial::d_step(data, state);
  } else {
    omp::d_step(data, state, threads);
  }
}

void b_step(const SolverData& data, AdmmState& state, int threads) {
  if (threads == 1) {
    serial::b_step(data, state);
  } else {
    omp::b_step(data, state, threads);
  }
}

void dual_step(AdmmState& state, double step, int threads) {
  if (threads == 1) {
    serial::dual_step(state, step);
  } else {
    omp::dual_step(state, step, threads);
  }
}

}  // namespace peakcut::kernels
