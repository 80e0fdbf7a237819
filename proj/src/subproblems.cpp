#include "peakcut/subproblems.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "peakcut/error.hpp"

namespace peakcut {

namespace {

// Targets sorted descending with running sums, for repeated level queries.
class LevelTable {
 public:
  LevelTable() = default;
  explicit LevelTable(std::span<const double> values) { reset(values); }

  void reset(std::span<const double> values) {
    sorted_.assign(values.begin(), values.end());
    std::sort(sorted_.begin(), sorted_.end(), std::greater<>());
    prefix_.resize(sorted_.size());
    double run = 0.0;
    for (std::size_t k = 0; k < sorted_.size(); ++k) {
      run += sorted_[k];
      prefix_[k] = run;
    }
  }

  bool empty() const { return sorted_.empty(); }
  double max() const { return sorted_.front(); }
  double total() const { return prefix_.empty() ? 0.0 : prefix_.back(); }

  // Level tau with sum_k max(v_k - tau, 0) = budget, for budget > 0. The
  // active count k satisfies v_k > (P_k - budget) / k exactly for a prefix of
  // k, so it is found by binary search.
  double level(double budget) const {
    std::size_t lo = 1;
    std::size_t hi = sorted_.size();
    while (lo < hi) {
      const std::size_t mid = (lo + hi + 1) / 2;
      if (active(mid, budget)) {
        lo = mid;
      } else {
        hi = mid - 1;
      }
    }
    return (prefix_[lo - 1] - budget) / static_cast<double>(lo);
  }

 private:
  bool active(std::size_t k, double budget) const {
    return sorted_[k - 1] * static_cast<double>(k) > prefix_[k - 1] - budget;
  }

  std::vector<double> sorted_;
  std::vector<double> prefix_;
};

// Capped positive-part level for one slot: theta >= 0 with
// sum max(a - theta, 0) = min(budget, sum a+).
class SlotLevel {
 public:
  void reset(std::span<const double> shifted) {
    positive_.clear();
    for (double a : shifted) {
      if (a > 0.0) positive_.push_back(a);
    }
    table_.reset(positive_);
  }
  double unconstrained_load() const { return table_.total(); }
  double theta(double budget) const {
    if (table_.empty() || budget >= table_.total()) return 0.0;
    if (budget <= 0.0) return table_.max();
    return std::max(0.0, table_.level(budget));
  }

 private:
  std::vector<double> positive_;
  LevelTable table_;
};

void check_rho(double rho) {
  if (!(rho > 0.0)) throw DomainError("penalty rho must be positive");
}

}  // namespace

void slot_projection(const SlotProjectionInput& in, std::span<double> out) {
  check_rho(in.rho);
  if (!(in.cap >= 0.0)) throw DomainError("slot capacity must be >= 0");
  const std::size_t n = in.targets.size();
  std::vector<double> shifted(n);
  for (std::size_t i = 0; i < n; ++i) {
    shifted[i] = in.targets[i] - in.duals[i] / in.rho;
  }
  SlotLevel level;
  level.reset(shifted);
  const double theta = level.theta(in.cap);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::max(shifted[i] - theta, 0.0);
  }
}

std::vector<double> slot_projection(const SlotProjectionInput& in) {
  std::vector<double> out(in.targets.size());
  slot_projection(in, out);
  return out;
}

double slot_objective(const SlotProjectionInput& in,
                      std::span<const double> d) {
  double value = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double gap = d[i] - in.targets[i];
    value += 0.5 * in.rho * gap * gap + in.duals[i] * d[i];
  }
  return value;
}

void solve_per_user(const UserProjectionInput& in, std::span<double> out) {
  check_rho(in.rho);
  const std::size_t J = in.anchors.size();
  if (!(in.demand >= 0.0)) throw DomainError("client demand must be >= 0");
  if (in.demand == 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  const double nearest = *std::min_element(in.latencies.begin(), in.latencies.end());
  if (nearest > in.latency_bound) {
    throw Infeasible("no datacenter within the client's latency bound");
  }

  std::vector<double> base(J);
  for (std::size_t j = 0; j < J; ++j) {
    base[j] = in.anchors[j] + (in.duals[j] - in.energy_coeffs[j]) / in.rho;
  }
  std::vector<double> shifted(J);
  LevelTable table;
  // b_j(eta) = max(base_j - eta L_j / rho - tau, 0), tau fixing sum b = D.
  auto project = [&](double eta, std::span<double> b) {
    for (std::size_t j = 0; j < J; ++j) {
      shifted[j] = base[j] - eta * in.latencies[j] / in.rho;
    }
    table.reset(shifted);
    const double tau = table.level(in.demand);
    double latency = 0.0;
    for (std::size_t j = 0; j < J; ++j) {
      b[j] = std::max(shifted[j] - tau, 0.0);
      latency += b[j] * in.latencies[j];
    }
    return latency;
  };

  const double bound = in.latency_bound * in.demand;
  if (project(0.0, out) <= bound) return;

  // Past eta_max all mass sits on the nearest datacenters.
  const auto [lo_it, hi_it] = std::minmax_element(base.begin(), base.end());
  double gap = std::numeric_limits<double>::infinity();
  for (double l : in.latencies) {
    if (l > nearest) gap = std::min(gap, l - nearest);
  }
  const double eta_max =
      in.rho * (*hi_it - *lo_it + in.demand) / gap * (1.0 + 1e-9) +
      std::numeric_limits<double>::min();

  std::vector<double> trial(J);
  double lo = 0.0;
  double hi = eta_max;
  double hi_latency = project(hi, out);
  for (int it = 0; it < 200; ++it) {
    if (bound - hi_latency <= 1e-10 * bound) break;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double latency = project(mid, trial);
    if (latency <= bound) {
      hi = mid;
      hi_latency = latency;
      std::copy(trial.begin(), trial.end(), out.begin());
    } else {
      lo = mid;
    }
  }
}

std::vector<double> solve_per_user(const UserProjectionInput& in) {
  std::vector<double> out(in.anchors.size());
  solve_per_user(in, out);
  return out;
}

double user_objective(const UserProjectionInput& in,
                      std::span<const double> b) {
  double value = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j) {
    const double gap = b[j] - in.anchors[j];
    value += 0.5 * in.rho * gap * gap + (in.energy_coeffs[j] - in.duals[j]) * b[j];
  }
  return value;
}

double solve_per_dc(const DcSubproblemInput& in, std::span<double> out) {
  check_rho(in.rho);
  if (!(in.cap >= 0.0)) throw DomainError("datacenter capacity must be >= 0");
  if (!(in.peak_coeff >= 0.0)) throw DomainError("peak coefficient must be >= 0");
  const std::size_t I = in.clients;
  const std::size_t T = in.slots;

  std::vector<double> shifted(I * T);
  for (std::size_t k = 0; k < I * T; ++k) {
    shifted[k] = in.targets[k] - in.duals[k] / in.rho;
  }
  std::vector<SlotLevel> levels(T);
  double top = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    levels[t].reset(std::span<const double>(shifted).subspan(t * I, I));
    top = std::max(top, levels[t].unconstrained_load());
  }
  top = std::min(top, in.cap);

  // F(m) = c m + sum_t g_t(m) is convex with F'(m) = c - rho sum_t theta_t(m),
  // so the optimal peak is the root of the non-increasing total level.
  auto pressure = [&](double m) {
    double sum = 0.0;
    for (const SlotLevel& level : levels) sum += level.theta(m);
    return in.rho * sum;
  };
  double peak;
  if (pressure(top) >= in.peak_coeff) {
    peak = top;
  } else if (pressure(0.0) <= in.peak_coeff) {
    peak = 0.0;
  } else {
    double lo = 0.0;
    double hi = top;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (pressure(mid) > in.peak_coeff ? lo : hi) = mid;
    }
    peak = 0.5 * (lo + hi);
  }

  for (std::size_t t = 0; t < T; ++t) {
    const double theta = levels[t].theta(peak);
    for (std::size_t i = 0; i < I; ++i) {
      out[t * I + i] = std::max(shifted[t * I + i] - theta, 0.0);
    }
  }
  return peak;
}

double dc_objective(const DcSubproblemInput& in, std::span<const double> d) {
  const std::size_t I = in.clients;
  double value = 0.0;
  double peak = 0.0;
  for (std::size_t t = 0; t < in.slots; ++t) {
    double load = 0.0;
    for (std::size_t i = 0; i < I; ++i) {
      const std::size_t k = t * I + i;
      const double gap = d[k] - in.targets[k];
      value += 0.5 * in.rho * gap * gap + in.duals[k] * d[k];
      load += d[k];
    }
    peak = std::max(peak, load);
  }
  return value + in.peak_coeff * peak;
}

}  // namespace peakcut
