#include <gtest/gtest.h>

#include "instances.hpp"
#include "peakcut/admm.hpp"
#include "peakcut/kernels.hpp"

using namespace peakcut;

namespace {

AdmmState random_state(const SolverData& data, instances::Rng& rng) {
  AdmmState s(data.clients, data.datacenters, data.slots, 1.0);
  for (double& v : s.b.flat()) v = instances::uniform(rng, 0.0, 0.5);
  for (double& v : s.d.flat()) v = instances::uniform(rng, 0.0, 0.5);
  for (double& v : s.lambda.flat()) v = instances::uniform(rng, -0.2, 0.2);
  return s;
}

SolverData medium_data(instances::Rng& rng) {
  const RoutingProblem p = instances::small_routing(rng, {40, 5, 24, 0.5, 0.6});
  return rescale(make_solver_data(p), natural_scaling(make_solver_data(p)));
}

}  // namespace

TEST(Kernels, OmpMatchesSerialBitwise) {
  instances::Rng rng(1);
  const SolverData data = medium_data(rng);
  for (int threads : {0, 1, 2, 3, 8}) {
    AdmmState serial = random_state(data, rng);
    AdmmState parallel = serial;
    for (int k = 0; k < 5; ++k) {
      kernels::serial::d_step(data, serial);
      kernels::omp::d_step(data, parallel, threads);
      ASSERT_EQ(serial.d, parallel.d) << threads << " threads";
      kernels::serial::b_step(data, serial);
      kernels::omp::b_step(data, parallel, threads);
      ASSERT_EQ(serial.b, parallel.b) << threads << " threads";
      kernels::serial::dual_step(serial, 0.7);
      kernels::omp::dual_step(parallel, 0.7, threads);
      ASSERT_EQ(serial.lambda, parallel.lambda) << threads << " threads";
    }
  }
}

TEST(Kernels, SolverIsIndependentOfThreadCount) {
  instances::Rng rng(2);
  const RoutingProblem p = instances::small_routing(rng, {20, 4, 12, 0.5, 0.6});
  AdmmOptions o;
  o.threads = 1;
  const AdmmResult serial = admm_solve(p, o);
  for (int threads : {0, 2, 4}) {
    o.threads = threads;
    const AdmmResult parallel = admm_solve(p, o);
    EXPECT_EQ(parallel.iterations, serial.iterations);
    EXPECT_EQ(parallel.solution.d, serial.solution.d);
    ASSERT_EQ(parallel.log.size(), serial.log.size());
    for (std::size_t k = 0; k < serial.log.size(); ++k) {
      EXPECT_EQ(parallel.log.records[k].objective, serial.log.records[k].objective);
    }
  }
}

TEST(Kernels, BlockInvariantsHoldAfterEachStep) {
  instances::Rng rng(3);
  const SolverData data = medium_data(rng);
  AdmmState s = random_state(data, rng);
  for (int k = 0; k < 3; ++k) {
    kernels::d_step(data, s, 0);
    for (std::size_t j = 0; j < data.datacenters; ++j) {
      for (std::size_t t = 0; t < data.slots; ++t) {
        double load = 0.0;
        for (double v : s.d.column(j, t)) {
          EXPECT_GE(v, 0.0);
          load += v;
        }
        EXPECT_LE(load, data.capacity[j] * (1 + 1e-12));
      }
    }
    kernels::b_step(data, s, 0);
    for (std::size_t i = 0; i < data.clients; ++i) {
      for (std::size_t t = 0; t < data.slots; ++t) {
        double sum = 0.0;
        double lat = 0.0;
        for (std::size_t j = 0; j < data.datacenters; ++j) {
          EXPECT_GE(s.b.at(i, j, t), 0.0);
          sum += s.b.at(i, j, t);
          lat += s.b.at(i, j, t) * data.latency_row(i)[j];
        }
        EXPECT_NEAR(sum, data.demand_at(i, t), 1e-10 * data.demand_at(i, t));
        EXPECT_LE(lat, data.latency_bound * data.demand_at(i, t) * (1 + 1e-9));
      }
    }
    kernels::dual_step(s, s.rho, 0);
  }
}
