#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "trialset.hpp"

namespace fz {

/// Synthetic EEG-like task: each class k couples a fixed spatial mixing
/// vector to an oscillation at 8 + 3k Hz with per-trial random phase, a
/// raised-cosine onset, and white Gaussian noise scaled to snr_db.
struct SynthConfig {
    std::size_t n_classes = 4;
    std::size_t n_channels = 22;
    double trial_seconds = 4.0;
    double fs = 250.0;
    std::size_t trials_per_class_train = 72;
    std::size_t trials_per_class_test = 72;
    double snr_db = -6.0;
    std::uint64_t seed = 42;

    /// Trial timeline origin, mirroring a [t0, t0 + trial_seconds] cut.
    double t0_seconds = 2.0;

    /// One independent substream per subject; default single subject "S0".
    std::vector<std::string> subjects;

    double class_frequency(std::size_t k) const { return 8.0 + 3.0 * static_cast<double>(k); }
};

/// Train and test splits come from disjoint RNG substreams of cfg.seed, so
/// changing one split never perturbs the other. Labels are balanced and the
/// trial order is shuffled deterministically.
std::pair<TrialSet, TrialSet> generate_synthetic(const SynthConfig& cfg);

} // namespace fz
