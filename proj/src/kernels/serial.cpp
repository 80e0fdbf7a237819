#include "peakcut/kernels.hpp"

#include "cells.hpp"

namespace peakcut::kernels::serial {

void d_step(const SolverData& data, AdmmState& state) {
  for (std::size_t j = 0; j < data.datacenters; ++j) {
    solve_per_dc(detail::dc_input(data, state, j), state.d.block(j));
  }
}

void b_step(const SolverData& data, AdmmState& state) {
  detail::ClientScratch scratch(data.datacenters);
  for (std::size_t i = 0; i < data.clients; ++i) {
    for (std::size_t t = 0; t < data.slots; ++t) {
      detail::project_client(data, state, i, t, scratch);
    }
  }
}

void dual_step(AdmmState& state, double step) {
  auto lambda = state.lambda.flat();
  const auto d = state.d.flat();
  const auto b = state.b.flat();
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    lambda[k] += step * (d[k] - b[k]);
  }
}

}  // namespace peakcut::kernels::serial
