#pragma once

#include <string>

#include "trialset.hpp"

namespace fz {

// .frz trial container, version 1, little-endian:
//   magic "FRZNET01" (8 bytes)
//   version u32
//   n_trials u32, n_channels u32, n_samples u32
//   fs f64
//   n_classes u32
//   payload: n_trials * n_channels * n_samples f64, trial-major then
//            channel then sample
//   labels: n_trials u16

void save_trialset(const TrialSet& set, const std::string& path);
TrialSet load_trialset(const std::string& path);

/// CSV escape hatch: each data row is one trial flattened channel-major to
/// channels*samples cells; the labels file holds one class index per line.
TrialSet import_csv_trials(const std::string& data_path, const std::string& labels_path,
                           std::size_t n_channels, double fs);

} // namespace fz
