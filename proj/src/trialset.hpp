#pragma once

#include <string>
#include <vector>

#include "matrix.hpp"

namespace fz {

/// One channels x samples segment with its class label and origin.
struct Trial {
    Matrix data;
    int label = 0;
    std::string subject_id = "S0";
    std::string session_id = "default";
};

/// Ordered, homogeneous collection of trials. All trials share channel and
/// sample counts; labels index into class_names.
struct TrialSet {
    std::vector<Trial> trials;
    double fs = 250.0;
    std::vector<std::string> class_names;
    std::size_t channel_count = 0;

    /// Time of each trial's first sample relative to its cue, in seconds.
    /// Synthetic sets use 2.0 by convention (the task period of a [2, 6] s
    /// segmentation); files default to 0.
    double t0_seconds = 0.0;

    std::size_t sample_count() const;
    std::size_t n_classes() const { return class_names.size(); }

    /// Enforces the shared-shape, label-range and finiteness invariants.
    void validate() const;

    std::vector<std::string> subject_ids() const; // unique, in first-seen order
};

std::vector<std::string> default_class_names(std::size_t n);

} // namespace fz
