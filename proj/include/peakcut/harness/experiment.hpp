#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "peakcut/admm.hpp"
#include "peakcut/harness/config.hpp"
#include "peakcut/model.hpp"

namespace peakcut::harness {

struct SchemeResult {
  std::string name;
  CostReport total;
  std::vector<std::string> datacenters;
  std::vector<CostReport> per_datacenter;
  std::vector<std::vector<double>> power_kw;  // [datacenter][slot], dynamic
  double saving = 0.0;                        // 1 - total / baseline total
  // Iterative schemes only.
  std::optional<int> iterations;
  bool converged = true;
  ConvergenceLog log;
};

struct ExperimentReport {
  Scenario scenario = Scenario::kGeo;
  std::vector<SchemeResult> schemes;
  std::vector<std::string> warnings;

  bool converged() const;
  const SchemeResult& scheme(const std::string& name) const;  // OutOfRange
};

// Error raised by run_experiment, tagged with the stage that failed
// ("inputs", "solve:<scheme>", "write").
class StageError : public Error {
 public:
  StageError(const std::string& stage, const std::string& what)
      : Error("[" + stage + "] " + what), stage_(stage) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// Runs the configured scenario in memory. Savings are filled in when the
// baseline scheme is among those run.
ExperimentReport run_scenario(const ExperimentConfig& config);

struct WriteOptions {
  bool include_timing = false;  // ms column in convergence.csv
};

// The four output files as strings, keyed by file name.
std::vector<std::pair<std::string, std::string>> render_report(
    const ExperimentReport& report, const ExperimentConfig& config,
    const WriteOptions& options = {});

// run_scenario + render_report + write into `out_dir`. Any failure throws
// StageError and leaves none of the output files behind.
ExperimentReport run_experiment(const ExperimentConfig& config,
                                const std::filesystem::path& out_dir,
                                const WriteOptions& options = {});

}  // namespace peakcut::harness
