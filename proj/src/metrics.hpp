#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fz {

struct EpochRecord {
    std::size_t epoch = 0; // 1-based
    double train_loss = 0.0;
    double test_accuracy = 0.0;
};

struct MaskStat {
    std::string layer;
    double threshold_t = 0.0;
    std::string mode;
    std::size_t frozen_count = 0;
    std::size_t size = 0;
    double frozen_fraction = 0.0;
};

struct MetricsReport {
    std::vector<EpochRecord> per_epoch;
    double max_test_accuracy = 0.0;
    std::size_t max_accuracy_epoch = 0; // 1-based, first epoch attaining the max
    std::optional<double> median_test_accuracy;
    std::optional<std::pair<std::size_t, std::size_t>> median_window_range;
    std::size_t smooth_width = 20;
    std::string config_hash;
    double runtime_seconds = 0.0;
    std::vector<MaskStat> mask_stats;
};

/// Trailing moving average; output length = len - width + 1. Element i is the
/// mean of the window ending at input index i + width - 1.
std::vector<double> smooth_curve(std::span<const double> series, std::size_t width);

/// Median of the inclusive 1-based epoch range [lo, hi]; an even count takes
/// the mean of the central pair.
double median_window(std::span<const double> series, std::size_t lo_epoch, std::size_t hi_epoch);

} // namespace fz
