#include "robustml/experiment.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace robustml {

ExperimentReport run_experiment(const RunConfig& cfg, const SyntheticSplit& split) {
  ExperimentReport rep;
  rep.seed = cfg.train.seed;
  {
    std::ostringstream echo;
    echo << "family=" << family_name(cfg.spec.family) << " epsilon=" << cfg.train.ball.radius
         << " eta=" << cfg.train.eta << " T=" << cfg.train.iterations
         << " reg_c=" << cfg.train.reg_c;
    rep.config_echo = echo.str();
  }
  for (TrainMode mode : {TrainMode::NoError, TrainMode::Random, TrainMode::Proposed}) {
    TrainConfig tc = cfg.train;
    tc.mode = mode;
    auto t0 = std::chrono::steady_clock::now();
    ModeResult r;
    r.mode = mode;
    try {
      TrainResult tr = train(cfg.spec, split.train, tc);
      r.metric = evaluate(cfg.spec, tr.params, split.test);
    } catch (const std::exception& e) {
      rep.error = std::string(mode_name(mode)) + ": " + e.what();
      rep.results.push_back(r);
      return rep;
    }
    auto t1 = std::chrono::steady_clock::now();
    r.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    if (!std::isfinite(r.metric.value)) {
      rep.error = std::string(mode_name(mode)) + ": non-finite test metric";
      rep.results.push_back(r);
      return rep;
    }
    rep.results.push_back(r);
  }
  rep.complete = true;
  return rep;
}

void write_report_csv(const ExperimentReport& rep, std::ostream& out) {
  out << "mode,metric,value\n";
  out << std::setprecision(17);
  for (const auto& r : rep.results) {
    out << mode_name(r.mode) << "," << r.metric.name << "," << r.metric.value << "\n";
  }
}

void write_report_summary(const ExperimentReport& rep, std::ostream& out) {
  out << "config: " << rep.config_echo << "\n";
  out << "seed:   " << rep.seed << "\n";
  if (!rep.complete) {
    out << "status: INCOMPLETE (" << rep.error << ")\n";
  }
  out << std::setprecision(8);
  for (const auto& r : rep.results) {
    out << "  " << std::left << std::setw(10) << mode_name(r.mode) << " " << r.metric.name << "="
        << r.metric.value << " (" << (r.metric.higher_is_better ? "higher" : "lower")
        << " is better)  wall=" << r.wall_seconds << "s\n";
  }
}

}  // namespace robustml
