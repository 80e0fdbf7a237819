#pragma once

// The three data-parallel phases of one ADMM iteration. `serial` is the
// reference implementation; `omp` must produce bit-identical results for any
// thread count, which holds because every output cell is written by exactly
// one independent subproblem and no reductions happen inside the kernels.

#include "peakcut/admm.hpp"
#include "peakcut/solver_data.hpp"

namespace peakcut::kernels {

namespace serial {
void d_step(const SolverData& data, AdmmState& state);
void b_step(const SolverData& data, AdmmState& state);
void dual_step(AdmmState& state, double step);
}  // namespace serial

namespace omp {
void d_step(const SolverData& data, AdmmState& state, int threads);
void b_step(const SolverData& data, AdmmState& state, int threads);
void dual_step(AdmmState& state, double step, int threads);
}  // namespace omp

// Dispatches on `threads`: 1 selects the serial reference.
void d_step(const SolverData& data, AdmmState& state, int threads);
void b_step(const SolverData& data, AdmmState& state, int threads);
void dual_step(AdmmState& state, double step, int threads);

}  // namespace peakcut::kernels
