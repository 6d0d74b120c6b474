#pragma once

#include <string>
#include <vector>

#include "metrics.hpp"
#include "model.hpp"
#include "optim.hpp"

namespace fz {

// Checkpoint container "FRZCKP01": layer parameters, masks with snapshots,
// optimizer moments, per-layer dropout RNG states, the batch-shuffle RNG and
// the per-epoch history so far. Resuming reproduces the uninterrupted run
// bit-exactly.

struct TrainingSnapshot {
    std::size_t completed_epochs = 0;
    std::array<std::uint64_t, 4> shuffle_rng_state{};
    std::uint64_t shuffle_rng_seed = 0;
    std::vector<EpochRecord> history;
};

void save_checkpoint(const std::string& path, const Model& model, const Optimizer& optimizer,
                     const TrainingSnapshot& snapshot, const std::string& config_hash);

/// Restores into a freshly built model/optimizer of the same architecture.
/// A mismatching architecture raises a ShapeError naming the offending layer.
TrainingSnapshot load_checkpoint(const std::string& path, Model& model, Optimizer& optimizer,
                                 const std::string& config_hash);

} // namespace fz
