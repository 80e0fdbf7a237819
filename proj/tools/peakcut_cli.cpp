// peakcut command line: single-DC scheduling, geo routing, benchmark
// comparisons, convergence runs and synthetic input generation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "peakcut/error.hpp"
#include "peakcut/harness/config.hpp"
#include "peakcut/harness/experiment.hpp"
#include "peakcut/harness/latency.hpp"
#include "peakcut/harness/traces.hpp"

namespace ph = peakcut::harness;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitNotConverged = 2;

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<double> rho;
  std::optional<int> max_iter;
  std::optional<double> eps_abs;
  std::optional<double> eps_rel;
  std::string out = "out";
  std::string scheme;
};

void add_common(CLI::App* cmd, Flags& f, bool needs_config) {
  auto* opt = cmd->add_option("--config", f.config, "experiment config (JSON) or manifest");
  if (needs_config) opt->required();
  cmd->add_option("--seed", f.seed, "master seed; re-derives every seed not pinned in the config");
  cmd->add_option("--out", f.out, "output directory (file for synth-*)");
}

void add_solver(CLI::App* cmd, Flags& f) {
  cmd->add_option("--rho", f.rho, "ADMM penalty parameter");
  cmd->add_option("--max-iter", f.max_iter, "outer iteration cap");
  cmd->add_option("--eps-abs", f.eps_abs, "absolute residual tolerance");
  cmd->add_option("--eps-rel", f.eps_rel, "relative residual tolerance");
}

ph::ParsedConfig load(const Flags& f) {
  ph::ParsedConfig parsed = ph::load_config(f.config);
  if (f.seed) parsed.reseed(*f.seed);
  auto& c = parsed.config;
  if (f.rho) c.admm.rho = c.subgradient.rho = *f.rho;
  if (f.max_iter) c.admm.max_iterations = c.subgradient.max_iterations = *f.max_iter;
  if (f.eps_abs) c.admm.eps_abs = c.subgradient.eps_abs = *f.eps_abs;
  if (f.eps_rel) c.admm.eps_rel = c.subgradient.eps_rel = *f.eps_rel;
  return parsed;
}

int run(ph::ExperimentConfig config, const Flags& f, ph::Scenario scenario,
        bool only_scheme, bool timing) {
  if (config.scenario != scenario) config.schemes.clear();
  config.scenario = scenario;
  if (only_scheme && !f.scheme.empty()) {
    config.schemes = {"baseline"};
    if (f.scheme != "baseline") config.schemes.push_back(f.scheme);
  } else if (!f.scheme.empty()) {
    config.schemes = {f.scheme};
  }
  config.validate();
  const ph::ExperimentReport report = ph::run_experiment(config, f.out, {timing});
  for (const ph::SchemeResult& s : report.schemes) {
    std::printf("%-12s total_usd=%.9g saving=%.9g", s.name.c_str(), s.total.total_usd,
                s.saving);
    if (s.iterations) std::printf(" iterations=%d", *s.iterations);
    std::printf("\n");
  }
  for (const std::string& w : report.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  return report.converged() ? kExitOk : kExitNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"peak-aware request routing and partial-execution scheduling"};
  app.require_subcommand(1);
  Flags f;

  auto* schedule = app.add_subcommand("schedule", "single-datacenter scheduling");
  add_common(schedule, f, true);
  schedule->add_option("--scheme", f.scheme, "random | greedy | best | bruteforce | baseline");

  auto* route = app.add_subcommand("route", "geo-distributed routing");
  add_common(route, f, true);
  add_solver(route, f);
  route->add_option("--scheme", f.scheme,
                    "admm+alg1 (default) | admm | energy | demand | baseline");

  auto* compare = app.add_subcommand("compare", "every scheme of the configured scenario");
  add_common(compare, f, true);
  add_solver(compare, f);
  compare->add_option("--scheme", f.scheme, "restrict to one scheme");

  auto* convergence = app.add_subcommand("convergence", "ADMM against the subgradient method");
  add_common(convergence, f, true);
  add_solver(convergence, f);

  auto* synth_trace = app.add_subcommand("synth-trace", "write a synthetic demand trace CSV");
  add_common(synth_trace, f, false);

  auto* synth_latency =
      app.add_subcommand("synth-latency", "write a synthetic latency matrix CSV");
  add_common(synth_latency, f, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*schedule) {
      return run(load(f).config, f, ph::Scenario::kSingleDc, true, false);
    }
    if (*route) {
      if (f.scheme.empty()) f.scheme = "admm+alg1";
      return run(load(f).config, f, ph::Scenario::kGeo, true, false);
    }
    if (*compare) {
      ph::ExperimentConfig config = load(f).config;
      const ph::Scenario scenario = config.scenario;
      return run(std::move(config), f, scenario, false, false);
    }
    if (*convergence) return run(load(f).config, f, ph::Scenario::kConvergence, false, true);
    if (*synth_trace) {
      ph::SynthTraceSpec spec;
      if (!f.config.empty()) {
        spec = load(f).config.trace;
      } else if (f.seed) {
        spec.seed = *f.seed;
      }
      std::ofstream out(f.out);
      if (!out) throw peakcut::ConfigError("cannot write " + f.out);
      ph::write_trace(out, ph::synth_trace(spec));
      return kExitOk;
    }
    if (*synth_latency) {
      std::ofstream out(f.out);
      if (!out) throw peakcut::ConfigError("cannot write " + f.out);
      ph::write_latency(out, ph::synth_latency(load(f).config.latency));
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalid;
  }
  return kExitInvalid;
}
