#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "loss.hpp"
#include "optim.hpp"
#include "preprocess.hpp"
#include "synth.hpp"

namespace fz {

/// One entry of the model layer stack. Which fields apply depends on kind:
///   conv1d       out_channels, kernel_len, stride
///   channel_mix  units (a 1x1 conv across channels)
///   activation   fn in {relu, elu, square, log}
///   pool         kernel_len, stride (mean pool over time)
///   flatten      -
///   dropout      p, optional seed
///   dense        units, optional init
///   frozen_dense units, threshold_t, mode, optional init / seed
struct LayerSpec {
    std::string kind;
    std::size_t out_channels = 0;
    std::size_t kernel_len = 0;
    std::size_t stride = 0;
    std::size_t units = 0;
    std::string fn;
    double p = 0.5;
    double threshold_t = 0.0;
    std::string mode = "frozen";
    std::string init = "uniform";
    std::optional<std::uint64_t> seed;
};

struct ClassifierSpec {
    std::string mode = "none"; // none | frozen | sparse
    double threshold_t = 0.0;
    std::string init = "uniform"; // uniform | zeros
    std::optional<std::uint64_t> mask_seed;
};

struct OptimizerSpec {
    std::string kind = "adamw"; // adamw | sgd
    AdamWHyper adamw;
    double sgd_lr = 1e-3;
};

struct DataSpec {
    std::optional<SynthConfig> synthetic;
    std::vector<std::string> train_paths;
    std::vector<std::string> test_paths;
};

struct PreprocessSpec {
    bool enabled = false; // master switch for the whole section
    bool filter = true;
    double f_lo = 4.0;
    double f_hi = 38.0;
    std::size_t fir_order = 200;
    bool normalize = true;
    std::string align = "per_split"; // per_split | pooled | none
    std::optional<std::pair<double, double>> window_seconds;
};

struct MetricsSpec {
    std::optional<std::pair<std::size_t, std::size_t>> median_window =
        std::pair<std::size_t, std::size_t>{400, 800};
    std::size_t smooth_width = 20;
};

struct CheckpointSpec {
    std::optional<std::string> save_path;
    std::optional<std::size_t> save_at_epoch;
    std::optional<std::size_t> stop_after_epoch;
    std::optional<std::string> resume_from;
};

struct ExperimentConfig {
    std::vector<LayerSpec> model; // empty = the shallow-style default stack
    ClassifierSpec classifier;
    OptimizerSpec optimizer;
    LossReduction loss_reduction = LossReduction::sum;
    std::size_t epochs = 800;
    std::size_t batch_size = 32;
    std::uint64_t seed = 42;
    DataSpec data;
    PreprocessSpec preprocess;
    MetricsSpec metrics;
    std::vector<std::string> pooled_subjects; // training-split subject filter
    std::vector<std::string> test_subjects;   // test-split subject filter
    CheckpointSpec checkpoint;
    std::vector<double> sweep_thresholds = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};

    /// Parses and validates; every problem is collected and reported in one
    /// ConfigError before any computation. Unknown keys are hard errors.
    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig from_json_file(const std::string& path);

    /// Semantic content only (checkpoint/IO knobs excluded), with the model
    /// stack made explicit; stable across equivalent runs.
    nlohmann::json to_canonical_json() const;

    /// FNV-1a 64 of the canonical JSON, as 16 hex digits.
    std::string config_hash() const;

    PreprocessSettings preprocess_settings() const;
};

/// The reference "shallow-style" stack: temporal conv, channel-mixing dense,
/// square, mean pool, log, dropout. The classifier layer is appended from
/// ClassifierSpec.
std::vector<LayerSpec> default_model_stack();

} // namespace fz
