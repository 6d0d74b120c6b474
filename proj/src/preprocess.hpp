#pragma once

#include <optional>
#include <span>
#include <string>

#include "fir.hpp"
#include "trialset.hpp"

namespace fz {

/// Divides by the global (all channels, all samples) max absolute value.
/// The resulting max-abs is exactly 1. All-zero trials are rejected.
Trial normalize_trial(const Trial& t);
TrialSet normalize_trials(const TrialSet& set);

/// Applies the FIR bandpass per channel to every trial.
TrialSet filter_trials(const TrialSet& set, const FirFilter& f);

struct AlignResult {
    TrialSet set;
    Matrix alignment; // R_bar^{-1/2}, the matrix that was applied
};

/// Whitens trials by the inverse square root of the average trial covariance
/// R_bar = (1/N) sum_i x_i x_i^T, summed in ascending trial order.
AlignResult euclidean_align(const TrialSet& set, double eps = 1e-10);

/// Left-multiplies every trial by a previously computed alignment matrix
/// (e.g. training statistics applied to a test split).
TrialSet apply_alignment(const TrialSet& set, const Matrix& alignment);

/// Cuts the half-open sample range [cue + t_start*fs, cue + t_end*fs) around
/// each cue. Labels pair with cues one-to-one.
TrialSet epoch(const Matrix& continuous, std::span<const std::size_t> cue_samples,
               double t_start, double t_end, double fs, std::span<const int> labels,
               std::size_t n_classes);

/// Per-trial window crop on an already epoched set, interpreted against each
/// trial's own timeline: the trial covers [t0_seconds, t0_seconds + len/fs).
TrialSet crop_window(const TrialSet& set, double t_start, double t_end);

enum class AlignScope { per_split, pooled };

struct PreprocessSettings {
    bool filter_enabled = true;
    double f_lo = 4.0;
    double f_hi = 38.0;
    std::size_t fir_order = 200;
    bool normalize = true;
    bool align = true;
    AlignScope align_scope = AlignScope::per_split;
    std::optional<std::pair<double, double>> window_seconds;
};

struct PreprocessedData {
    TrialSet train;
    TrialSet test;
    std::size_t edge_transient_samples = 0; // per side, when filtering ran
};

/// Full pipeline in the order filter -> window -> normalize -> align.
/// Alignment statistics are computed per subject: per_split estimates R_bar
/// from that subject's training trials and reuses it unchanged on its test
/// trials (subjects absent from training fall back to their own test trials,
/// which uses no labels); pooled estimates over the subject's trials from
/// both splits.
PreprocessedData run_preprocess(const TrialSet& train, const TrialSet& test,
                                const PreprocessSettings& settings);

} // namespace fz
