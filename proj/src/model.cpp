#include "peakcut/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "peakcut/error.hpp"

namespace peakcut {

namespace {

constexpr double kCapacityTolerance = 1e-12;
constexpr double kSlaSlack = 1e-9;
constexpr double kEndpointSlack = 1e-12;

}  // namespace

DemandTrace::DemandTrace(std::vector<double> demand, int slot_minutes)
    : demand_(std::move(demand)), slot_minutes_(slot_minutes) {
  if (slot_minutes_ <= 0) throw DomainError("slot_minutes must be positive");
  if (demand_.empty()) throw DomainError("demand trace is empty");
  for (std::size_t t = 0; t < demand_.size(); ++t) {
    if (!(demand_[t] >= 0.0) || !std::isfinite(demand_[t])) {
      throw DomainError("negative or non-finite demand at slot " +
                        std::to_string(t));
    }
  }
}

double DemandTrace::total() const {
  return std::accumulate(demand_.begin(), demand_.end(), 0.0);
}

void PowerModel::validate() const {
  if (!(idle_w >= 0.0) || !(peak_w > idle_w)) {
    throw DomainError("power model requires peak_w > idle_w >= 0");
  }
  if (servers < 1) throw DomainError("power model requires servers >= 1");
  if (!(requests_per_server_slot > 0.0)) {
    throw DomainError("requests_per_server_slot must be positive");
  }
}

void Tariff::validate() const {
  if (!(demand_price_usd_per_kw >= 0.0) || !(energy_price_usd_per_kwh >= 0.0)) {
    throw DomainError("tariff '" + name + "' has a negative price");
  }
}

QualityProfile::QualityProfile(double c2, double c1, double c0)
    : c2_(c2), c1_(c1), c0_(c0) {
  if (!(c2_ < 0.0)) throw DomainError("quality profile must be concave");
  // Q' is decreasing, so Q' > 0 on [0, 1] reduces to Q'(1) > 0.
  if (!(2.0 * c2_ + c1_ > 0.0)) {
    throw DomainError("quality profile must be increasing on [0, 1]");
  }
  if (c2_ + c1_ + c0_ > 1.0 + 1e-9) {
    throw DomainError("quality profile exceeds 1 at alpha = 1");
  }
}

SlaPolicy::SlaPolicy(double percentile, double high_quality,
                     double low_quality, const QualityProfile& profile)
    : percentile_(percentile),
      high_quality_(high_quality),
      low_quality_(low_quality),
      profile_(profile) {
  if (!(percentile_ >= 0.0 && percentile_ <= 1.0)) {
    throw DomainError("SLA percentile must lie in [0, 1]");
  }
  if (!(0.0 < low_quality_ && low_quality_ < high_quality_ &&
        high_quality_ <= 1.0)) {
    throw DomainError("SLA requires 0 < low_quality < high_quality <= 1");
  }
  high_alpha_ = quality_inverse(high_quality_, profile_);
  low_alpha_ = quality_inverse(low_quality_, profile_);
  if (!(0.0 < low_alpha_ && low_alpha_ < high_alpha_ && high_alpha_ <= 1.0)) {
    throw DomainError("SLA quality levels map to invalid completion ratios");
  }
}

double utilization(double alpha, double demand, const PowerModel& model) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw DomainError("completion ratio outside [0, 1]");
  }
  if (!(demand >= 0.0)) throw DomainError("negative demand");
  const double u = alpha * demand / model.capacity();
  if (u > 1.0 + kCapacityTolerance) {
    throw CapacityExceeded("utilization " + std::to_string(u) +
                           " exceeds server capacity");
  }
  return u;
}

double dynamic_power_kw(double alpha, double demand, const PowerModel& model) {
  utilization(alpha, demand, model);
  // N cancels: (E_P - E_I) * N * alpha D / (900 N).
  return alpha * demand * model.kw_per_request();
}

CostReport billing_cost(std::span<const double> power_kw, const Tariff& tariff,
                        int slot_minutes) {
  if (power_kw.empty()) throw DomainError("power series is empty");
  if (slot_minutes <= 0) throw DomainError("slot_minutes must be positive");
  CostReport report;
  double energy_kwh = 0.0;
  for (double p : power_kw) {
    if (!(p >= 0.0)) throw DomainError("negative power in series");
    report.peak_kw = std::max(report.peak_kw, p);
    energy_kwh += p;
  }
  report.energy_kwh = energy_kwh * (slot_minutes / 60.0);
  report.demand_charge_usd = report.peak_kw * tariff.demand_price_usd_per_kw;
  report.energy_charge_usd =
      report.energy_kwh * tariff.energy_price_usd_per_kwh;
  report.total_usd = report.demand_charge_usd + report.energy_charge_usd;
  return report;
}

double quality(double alpha, const QualityProfile& profile) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw DomainError("completion ratio outside [0, 1]");
  }
  return (profile.c2() * alpha + profile.c1()) * alpha + profile.c0();
}

double quality_inverse(double q, const QualityProfile& profile) {
  const double lo = quality(0.0, profile);
  const double hi = quality(1.0, profile);
  if (!(q >= lo - kEndpointSlack && q <= hi + kEndpointSlack)) {
    throw OutOfRange("quality " + std::to_string(q) + " outside [Q(0), Q(1)]");
  }
  q = std::clamp(q, lo, hi);
  const double c2 = profile.c2();
  const double c1 = profile.c1();
  const double disc = c1 * c1 + 4.0 * c2 * (q - profile.c0());
  if (disc > 1e-12) {
    // Smaller root of c2 a^2 + c1 a + (c0 - q), cancellation-free form.
    const double alpha = 2.0 * (q - profile.c0()) / (c1 + std::sqrt(disc));
    return std::clamp(alpha, 0.0, 1.0);
  }
  double a = 0.0;
  double b = 1.0;
  for (int it = 0; it < 200 && b - a > 1e-16; ++it) {
    const double mid = 0.5 * (a + b);
    (quality(mid, profile) < q ? a : b) = mid;
  }
  return 0.5 * (a + b);
}

bool sla_satisfied(const Schedule& schedule, const DemandTrace& trace,
                   const SlaPolicy& policy) {
  if (schedule.size() != trace.size()) {
    throw LengthMismatch("schedule and trace lengths differ");
  }
  double high = 0.0;
  double total = 0.0;
  for (std::size_t t = 0; t < trace.size(); ++t) {
    total += trace[t];
    if (schedule.modes[t]) high += trace[t];
  }
  return high >= policy.percentile() * total - kSlaSlack * total;
}

}  // namespace peakcut
