#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "robustml/synthetic.hpp"

namespace robustml {

struct ModeResult {
  TrainMode mode;
  MetricRecord metric;
  double wall_seconds = 0.0;
};

/// Three-way comparison (no perturbation / random / worst-case) on one
/// train/test split with a shared seed.
struct ExperimentReport {
  std::vector<ModeResult> results;
  std::uint64_t seed = 0;
  std::string config_echo;
  bool complete = false;  // false if any mode aborted
  std::string error;      // abort message, if any
};

ExperimentReport run_experiment(const RunConfig& cfg, const SyntheticSplit& split);

/// Deterministic CSV table: mode,metric,value (no timings — those vary per run
/// and live in the summary instead).
void write_report_csv(const ExperimentReport& rep, std::ostream& out);

/// Human-readable summary including wall-clock per mode.
void write_report_summary(const ExperimentReport& rep, std::ostream& out);

}  // namespace robustml
