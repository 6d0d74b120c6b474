#pragma once

#include <functional>
#include <memory>
#include <string>

#include "config.hpp"
#include "metrics.hpp"
#include "model.hpp"
#include "trialset.hpp"

namespace fz {

struct RunOptions {
    int threads = 1; // sweep/compare parallelism only; a single run is sequential
    bool quiet = false;
};

struct LoadedData {
    TrialSet train;
    TrialSet test;
};

/// Generates or loads the configured data and applies the subject filters.
LoadedData load_experiment_data(const ExperimentConfig& cfg);

/// Runs the configured preprocessing pipeline.
LoadedData preprocess_experiment_data(const ExperimentConfig& cfg, const LoadedData& data);

struct RunResult {
    MetricsReport report;
    std::shared_ptr<Model> model; // final weights
};

/// Deterministic full training loop: batch order from the seed's shuffle
/// substream, per-epoch evaluation on the untouched test split, masks built
/// once before epoch 1. Honors the checkpoint section (save/stop/resume).
RunResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// Same, on already prepared data (shared immutably across sweep runs).
RunResult run_experiment_on(const ExperimentConfig& cfg, const TrialSet& train,
                            const TrialSet& test, const RunOptions& opts = {});

struct SweepCell {
    double threshold_t = 0.0;
    bool ok = false;
    std::string error;
    MetricsReport report;
};

struct SweepResult {
    std::vector<SweepCell> cells; // ascending threshold order
};

/// One run per threshold with identical seed and data; failed cells are
/// marked and the remaining runs continue.
SweepResult threshold_sweep(const ExperimentConfig& cfg, std::vector<double> thresholds,
                            const RunOptions& opts = {});

struct CompareResult {
    double threshold_t = 0.0;
    MetricsReport baseline; // classifier mode none
    MetricsReport frozen;   // classifier mode frozen at t
};

CompareResult compare_before_after(const ExperimentConfig& cfg, double t,
                                   const RunOptions& opts = {});

/// Accuracy of argmax predictions; ties break to the lowest class index.
double evaluate_accuracy(Model& model, const TrialSet& test, std::size_t batch_size);

/// Flattens trials (channel-major) into a batch matrix.
Matrix batch_from_trials(const TrialSet& set, std::span<const std::size_t> indices);

} // namespace fz
