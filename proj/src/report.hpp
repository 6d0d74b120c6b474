#pragma once

#include <string>

#include "experiment.hpp"
#include "metrics.hpp"

namespace fz {

// Run artifacts under an output directory:
//   metrics.csv   "epoch,train_loss,test_accuracy", 9 significant digits
//   summary.json  config hash, max/median metrics, mask statistics, runtime
//   accuracy.svg  test accuracy vs epoch
// Sweeps add sweep.csv / sweep.svg; comparisons add compare.csv / compare.svg.
// All files are written atomically (temp + rename).

void emit_report(const MetricsReport& report, const std::string& out_dir);
void emit_sweep(const SweepResult& sweep, const ExperimentConfig& cfg,
                const std::string& out_dir);
void emit_compare(const CompareResult& cmp, const ExperimentConfig& cfg,
                  const std::string& out_dir);

std::string metrics_csv_text(const MetricsReport& report);
std::string summary_json_text(const MetricsReport& report);

/// Rebuilds the SVG charts in a run directory from its CSV artifacts.
void rerender_report(const std::string& run_dir, bool quiet);

} // namespace fz
