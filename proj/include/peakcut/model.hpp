#pragma once

// Physical and economic model of a datacenter under a two-part tariff:
// server power as a function of load, the demand + energy bill, the
// response-quality profile of partial execution, and the percentile SLA.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace peakcut {

// Request demand per slot for one datacenter (or one client).
class DemandTrace {
 public:
  DemandTrace() = default;
  explicit DemandTrace(std::vector<double> demand, int slot_minutes = 15);

  int slot_minutes() const { return slot_minutes_; }
  double slot_hours() const { return slot_minutes_ / 60.0; }
  std::size_t size() const { return demand_.size(); }
  const std::vector<double>& values() const { return demand_; }
  double operator[](std::size_t t) const { return demand_[t]; }
  double total() const;

 private:
  std::vector<double> demand_;
  int slot_minutes_ = 15;
};

// Affine server power model E_I + (E_P - E_I) u. requests_per_server_slot
// folds cache miss rate, per-request cost and slot length into one constant.
struct PowerModel {
  double idle_w = 400.0;
  double peak_w = 750.0;
  int servers = 5000;
  double requests_per_server_slot = 900.0;

  void validate() const;
  // Requests per slot the datacenter can absorb at full utilization.
  double capacity() const { return requests_per_server_slot * servers; }
  // Dynamic kW drawn per request per slot at alpha = 1.
  double kw_per_request() const {
    return (peak_w - idle_w) / requests_per_server_slot / 1000.0;
  }
  double idle_kw() const { return idle_w * servers / 1000.0; }
};

struct Tariff {
  std::string name;
  double demand_price_usd_per_kw = 0.0;   // per billing cycle
  double energy_price_usd_per_kwh = 0.0;

  void validate() const;
};

// Q(alpha) = c2 alpha^2 + c1 alpha + c0, concave and increasing on [0, 1].
class QualityProfile {
 public:
  QualityProfile() : QualityProfile(-0.82129975, 1.67356677, 0.14773298) {}
  QualityProfile(double c2, double c1, double c0);

  double c2() const { return c2_; }
  double c1() const { return c1_; }
  double c0() const { return c0_; }

 private:
  double c2_, c1_, c0_;
};

// Percentile SLA: at least `percentile` of demand at `high_quality`, the rest
// at `low_quality`. The completion ratios of the two modes are derived from
// the profile once, at construction.
class SlaPolicy {
 public:
  SlaPolicy() : SlaPolicy(0.95, 0.99, 0.8) {}
  SlaPolicy(double percentile, double high_quality, double low_quality,
            const QualityProfile& profile = QualityProfile{});

  double percentile() const { return percentile_; }
  double high_quality() const { return high_quality_; }
  double low_quality() const { return low_quality_; }
  const QualityProfile& profile() const { return profile_; }
  double high_alpha() const { return high_alpha_; }
  double low_alpha() const { return low_alpha_; }

 private:
  double percentile_, high_quality_, low_quality_;
  QualityProfile profile_;
  double high_alpha_, low_alpha_;
};

// X(t): 1 = high power mode, 0 = low power mode (partial execution).
struct Schedule {
  std::vector<std::uint8_t> modes;

  static Schedule all_high(std::size_t slots) {
    return Schedule{std::vector<std::uint8_t>(slots, 1)};
  }
  std::size_t size() const { return modes.size(); }
  bool operator==(const Schedule&) const = default;
};

struct CostReport {
  double peak_kw = 0.0;
  double energy_kwh = 0.0;
  double demand_charge_usd = 0.0;
  double energy_charge_usd = 0.0;
  double total_usd = 0.0;
  double sla_attainment = 1.0;
  // Constant idle draw. Never billed by the optimizer, reported for
  // idle-inclusive power plots.
  double idle_kw = 0.0;
};

double utilization(double alpha, double demand, const PowerModel& model);
double dynamic_power_kw(double alpha, double demand, const PowerModel& model);

CostReport billing_cost(std::span<const double> power_kw, const Tariff& tariff,
                        int slot_minutes);

double quality(double alpha, const QualityProfile& profile);
double quality_inverse(double q, const QualityProfile& profile);

bool sla_satisfied(const Schedule& schedule, const DemandTrace& trace,
                   const SlaPolicy& policy);

}  // namespace peakcut
