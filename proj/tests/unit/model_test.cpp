#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "peakcut/error.hpp"
#include "peakcut/model.hpp"

using namespace peakcut;

namespace {

const Tariff kSc{"SC", 14.76, 0.05037};

PowerModel servers(int n) {
  PowerModel m;
  m.servers = n;
  return m;
}

}  // namespace

TEST(DemandTrace, RejectsEmptyNegativeAndNonFinite) {
  EXPECT_THROW(DemandTrace(std::vector<double>{}), DomainError);
  EXPECT_THROW(DemandTrace({1.0, -1.0}), DomainError);
  EXPECT_THROW(DemandTrace({1.0, NAN}), DomainError);
  EXPECT_THROW(DemandTrace({1.0}, 0), DomainError);
  const DemandTrace t({1.0, 2.5});
  EXPECT_DOUBLE_EQ(t.total(), 3.5);
  EXPECT_DOUBLE_EQ(t.slot_hours(), 0.25);
}

TEST(PowerModel, Validation) {
  PowerModel m;
  EXPECT_NO_THROW(m.validate());
  m.peak_w = m.idle_w;
  EXPECT_THROW(m.validate(), DomainError);
  EXPECT_THROW(servers(0).validate(), DomainError);
  EXPECT_DOUBLE_EQ(servers(5000).capacity(), 4.5e6);
}

TEST(Utilization, Examples) {
  EXPECT_EQ(utilization(0.0, 1e6, servers(5000)), 0.0);
  EXPECT_DOUBLE_EQ(utilization(1.0, 900, servers(1)), 1.0);
  EXPECT_DOUBLE_EQ(utilization(1.0, 4.5e6, servers(5000)), 1.0);
}

TEST(Utilization, CapacityAndDomainErrors) {
  EXPECT_THROW(utilization(1.0, 901, servers(1)), CapacityExceeded);
  EXPECT_NO_THROW(utilization(1.0, 900 * (1 + 1e-13), servers(1)));
  EXPECT_THROW(utilization(1.1, 1, servers(1)), DomainError);
  EXPECT_THROW(utilization(0.5, -1, servers(1)), DomainError);
}

TEST(DynamicPower, Examples) {
  EXPECT_EQ(dynamic_power_kw(0.0, 12345, servers(5000)), 0.0);
  EXPECT_NEAR(dynamic_power_kw(1.0, 900, servers(1)), 0.35, 1e-15);
  EXPECT_NEAR(dynamic_power_kw(1.0, 4.5e6, servers(5000)), 1750.0, 1e-9);
  EXPECT_THROW(dynamic_power_kw(1.0, 4.6e6, servers(5000)), CapacityExceeded);
}

TEST(DynamicPower, IndependentOfServerCount) {
  EXPECT_DOUBLE_EQ(dynamic_power_kw(0.7, 1e5, servers(200)),
                   dynamic_power_kw(0.7, 1e5, servers(90000)));
}

TEST(DynamicPower, LinearInAlphaAndDemand) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const PowerModel m = servers(5000);
  for (int k = 0; k < 200; ++k) {
    const double alpha = 0.5 * u(rng);
    const double demand = 2e6 * u(rng);
    const double scale = 2.0 * u(rng);
    const double base = dynamic_power_kw(alpha, demand, m);
    EXPECT_NEAR(dynamic_power_kw(scale * alpha, demand, m), scale * base, 1e-12 * (1 + base));
    EXPECT_NEAR(dynamic_power_kw(alpha, scale * demand, m), scale * base, 1e-12 * (1 + base));
  }
}

TEST(Billing, FlatHundredKwMonth) {
  const std::vector<double> kw(720 * 4, 100.0);
  const CostReport r = billing_cost(kw, kSc, 15);
  EXPECT_NEAR(r.demand_charge_usd, 1476.00, 1e-9);
  EXPECT_NEAR(r.energy_charge_usd, 3626.64, 1e-7);
  EXPECT_DOUBLE_EQ(r.total_usd, r.demand_charge_usd + r.energy_charge_usd);
  EXPECT_DOUBLE_EQ(r.peak_kw, 100.0);
}

TEST(Billing, ScRowOfMonthlyBillTable) {
  // 10 MW peak, 6 MW average over 720 h.
  std::vector<double> kw(720 * 4, 6000.0);
  kw[0] = 10000.0;
  kw[1] = 2000.0;
  const CostReport r = billing_cost(kw, kSc, 15);
  EXPECT_NEAR(r.demand_charge_usd, 147600.00, 0.005);
  EXPECT_NEAR(r.energy_charge_usd, 217598.40, 0.005);
}

TEST(Billing, ZeroSeriesAndErrors) {
  const std::vector<double> zero(4, 0.0);
  const CostReport r = billing_cost(zero, kSc, 15);
  EXPECT_EQ(r.demand_charge_usd, 0.0);
  EXPECT_EQ(r.energy_charge_usd, 0.0);
  EXPECT_EQ(r.total_usd, 0.0);
  EXPECT_THROW(billing_cost(std::vector<double>{}, kSc, 15), DomainError);
  EXPECT_THROW(billing_cost(std::vector<double>{-1.0}, kSc, 15), DomainError);
}

TEST(Billing, MatchesOracleAndIsMonotone) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    std::vector<double> kw(1 + rng() % 50);
    for (double& v : kw) v = 1000.0 * u(rng);
    const Tariff t{"x", 20.0 * u(rng), 0.1 * u(rng)};
    const CostReport r = billing_cost(kw, t, 15);
    const oracle::Bill o = oracle::bill(kw, t.demand_price_usd_per_kw,
                                        t.energy_price_usd_per_kwh, 0.25);
    EXPECT_NEAR(r.total_usd, o.total(), 1e-9 * (1 + o.total()));

    std::vector<double> larger = kw;
    for (double& v : larger) v += 10.0 * u(rng);
    EXPECT_GE(billing_cost(larger, t, 15).total_usd, r.total_usd);
  }
}

TEST(Quality, Examples) {
  const QualityProfile q;
  EXPECT_DOUBLE_EQ(quality(0.0, q), 0.14773298);
  EXPECT_NEAR(quality(1.0, q), 1.0, 1e-12);
  EXPECT_NEAR(quality(0.5, q), -0.82129975 / 4 + 1.67356677 / 2 + 0.14773298, 1e-15);
  EXPECT_NEAR(quality(0.5, q), 0.77919143, 1e-8);
  EXPECT_THROW(quality(1.5, q), DomainError);
}

TEST(Quality, ProfileValidation) {
  EXPECT_THROW(QualityProfile(0.1, 1.0, 0.0), DomainError);    // convex
  EXPECT_THROW(QualityProfile(-1.0, 1.0, 0.0), DomainError);   // decreasing near 1
  EXPECT_THROW(QualityProfile(-0.1, 1.0, 0.5), DomainError);   // Q(1) > 1
}

TEST(QualityInverse, Examples) {
  const QualityProfile q;
  EXPECT_EQ(quality_inverse(0.14773298, q), 0.0);
  const double lo = quality_inverse(0.8, q);
  const double hi = quality_inverse(0.99, q);
  EXPECT_NEAR(lo, oracle::quality_inverse(0.8, q.c2(), q.c1(), q.c0()), 1e-12);
  EXPECT_NEAR(hi, oracle::quality_inverse(0.99, q.c2(), q.c1(), q.c0()), 1e-12);
  EXPECT_NEAR(lo, 0.52502, 1e-5);
  EXPECT_NEAR(hi, 0.9069, 1e-4);
  EXPECT_THROW(quality_inverse(0.1, q), OutOfRange);
  EXPECT_THROW(quality_inverse(1.01, q), OutOfRange);
}

TEST(QualityInverse, RoundTripsAndIsIncreasing) {
  const QualityProfile q;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double previous = -1.0;
  for (int k = 0; k <= 1000; ++k) {
    const double alpha = k / 1000.0;
    EXPECT_NEAR(quality_inverse(quality(alpha, q), q), alpha, 1e-9);
    const double value = quality(alpha, q);
    EXPECT_GT(value, previous);
    previous = value;
  }
  for (int k = 0; k < 1000; ++k) {
    const double target = 0.14773298 + u(rng) * (1.0 - 0.14773298);
    EXPECT_LE(std::abs(quality(quality_inverse(target, q), q) - target), 1e-10);
  }
}

TEST(QualityInverse, DegenerateDiscriminantFallsBack) {
  // Q'(1) is nearly zero, so the discriminant vanishes near the top.
  const QualityProfile flat_top(-0.5, 1.0 + 1e-14, 0.5 - 1e-14);
  EXPECT_NEAR(quality_inverse(1.0, flat_top), 1.0, 1e-6);
  EXPECT_NEAR(quality(quality_inverse(0.9, flat_top), flat_top), 0.9, 1e-10);
}

TEST(SlaPolicy, DerivedAlphas) {
  const SlaPolicy p;
  EXPECT_EQ(p.percentile(), 0.95);
  EXPECT_NEAR(p.low_alpha() / p.high_alpha(), 0.579, 1e-3);
  EXPECT_THROW(SlaPolicy(1.1, 0.99, 0.8), DomainError);
  EXPECT_THROW(SlaPolicy(0.9, 0.8, 0.99), DomainError);
}

TEST(SlaSatisfied, Examples) {
  const DemandTrace d({10, 30, 20, 40});
  EXPECT_TRUE(sla_satisfied(Schedule::all_high(4), d, SlaPolicy()));
  const Schedule x{{1, 1, 1, 0}};
  EXPECT_FALSE(sla_satisfied(x, d, SlaPolicy(0.95, 0.99, 0.8)));
  EXPECT_TRUE(sla_satisfied(x, d, SlaPolicy(0.6, 0.99, 0.8)));
  EXPECT_THROW(sla_satisfied(Schedule{{1, 1}}, d, SlaPolicy()), LengthMismatch);
}
