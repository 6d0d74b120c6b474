#include "preprocess.hpp"

#include <cmath>
#include <map>
#include <string>

#include "error.hpp"
#include "sym_eigen.hpp"

namespace fz {

Trial normalize_trial(const Trial& t) {
    const double peak = max_abs(t.data);
    if (peak == 0.0) throw DomainError("normalize_trial: all-zero trial is degenerate");
    Trial out = t;
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data.data()[i] /= peak;
    return out;
}

TrialSet normalize_trials(const TrialSet& set) {
    TrialSet out = set;
    for (std::size_t i = 0; i < out.trials.size(); ++i) {
        try {
            out.trials[i] = normalize_trial(set.trials[i]);
        } catch (const DomainError&) {
            throw DomainError("normalize_trials: trial " + std::to_string(i) + " is all zero");
        }
    }
    return out;
}

TrialSet filter_trials(const TrialSet& set, const FirFilter& f) {
    TrialSet out = set;
    for (Trial& t : out.trials) t.data = filter_signal(t.data, f);
    return out;
}

AlignResult euclidean_align(const TrialSet& set, double eps) {
    if (set.trials.empty()) throw DomainError("euclidean_align: empty trial set");
    const std::size_t ch = set.channel_count;
    Matrix r_bar(ch, ch, 0.0);
    for (const Trial& t : set.trials) { // ascending trial order, fixed
        const Matrix cov = matmul(t.data, transpose(t.data));
        for (std::size_t i = 0; i < r_bar.size(); ++i) r_bar.data()[i] += cov.data()[i];
    }
    const double inv_n = 1.0 / static_cast<double>(set.trials.size());
    for (std::size_t i = 0; i < r_bar.size(); ++i) r_bar.data()[i] *= inv_n;

    AlignResult res;
    res.alignment = sym_inv_sqrt(r_bar, eps);
    res.set = apply_alignment(set, res.alignment);
    return res;
}

TrialSet apply_alignment(const TrialSet& set, const Matrix& alignment) {
    if (alignment.rows() != set.channel_count || alignment.cols() != set.channel_count) {
        throw ShapeError("apply_alignment: alignment is " + std::to_string(alignment.rows()) +
                         "x" + std::to_string(alignment.cols()) + " but set has " +
                         std::to_string(set.channel_count) + " channels");
    }
    TrialSet out = set;
    for (Trial& t : out.trials) t.data = matmul(alignment, t.data);
    return out;
}

TrialSet epoch(const Matrix& continuous, std::span<const std::size_t> cue_samples,
               double t_start, double t_end, double fs, std::span<const int> labels,
               std::size_t n_classes) {
    if (!(t_end > t_start)) throw DomainError("epoch: window end must exceed start");
    if (labels.size() != cue_samples.size()) {
        throw DomainError("epoch: " + std::to_string(cue_samples.size()) + " cues but " +
                          std::to_string(labels.size()) + " labels");
    }
    const long long offset = std::llround(t_start * fs);
    const long long length = std::llround((t_end - t_start) * fs);
    if (length < 1) throw DomainError("epoch: window shorter than one sample");

    TrialSet out;
    out.fs = fs;
    out.channel_count = continuous.rows();
    out.class_names = default_class_names(n_classes);
    out.t0_seconds = t_start;
    for (std::size_t i = 0; i < cue_samples.size(); ++i) {
        const long long start = static_cast<long long>(cue_samples[i]) + offset;
        const long long stop = start + length;
        if (start < 0 || stop > static_cast<long long>(continuous.cols())) {
            throw DomainError("epoch: window [" + std::to_string(start) + ", " +
                              std::to_string(stop) + ") for cue index " + std::to_string(i) +
                              " exceeds recording of " + std::to_string(continuous.cols()) +
                              " samples");
        }
        Trial t;
        t.label = labels[i];
        t.data = Matrix(continuous.rows(), static_cast<std::size_t>(length));
        for (std::size_t ch = 0; ch < continuous.rows(); ++ch) {
            const double* src = continuous.row_ptr(ch) + start;
            double* dst = t.data.row_ptr(ch);
            for (long long s = 0; s < length; ++s) dst[s] = src[s];
        }
        out.trials.push_back(std::move(t));
    }
    out.validate();
    return out;
}

TrialSet crop_window(const TrialSet& set, double t_start, double t_end) {
    if (set.trials.empty()) throw DomainError("crop_window: empty trial set");
    const double t0 = set.t0_seconds;
    const double t1 = t0 + static_cast<double>(set.sample_count()) / set.fs;
    const long long begin = std::llround((t_start - t0) * set.fs);
    const long long length = std::llround((t_end - t_start) * set.fs);
    if (t_start < t0 - 1e-9 || begin < 0 ||
        begin + length > static_cast<long long>(set.sample_count())) {
        throw DomainError("crop_window: window [" + std::to_string(t_start) + ", " +
                          std::to_string(t_end) + ") s outside trial span [" +
                          std::to_string(t0) + ", " + std::to_string(t1) + ") s");
    }
    if (length < 1) throw DomainError("crop_window: window shorter than one sample");

    TrialSet out = set;
    out.t0_seconds = t_start;
    for (Trial& t : out.trials) {
        Matrix cropped(t.data.rows(), static_cast<std::size_t>(length));
        for (std::size_t ch = 0; ch < t.data.rows(); ++ch) {
            const double* src = t.data.row_ptr(ch) + begin;
            double* dst = cropped.row_ptr(ch);
            for (long long s = 0; s < length; ++s) dst[s] = src[s];
        }
        t.data = std::move(cropped);
    }
    return out;
}

namespace {

// Stable subject partition: bucket indices per subject in first-seen order.
std::vector<std::pair<std::string, std::vector<std::size_t>>> by_subject(const TrialSet& set) {
    std::vector<std::pair<std::string, std::vector<std::size_t>>> groups;
    for (std::size_t i = 0; i < set.trials.size(); ++i) {
        const std::string& id = set.trials[i].subject_id;
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&](const auto& g) { return g.first == id; });
        if (it == groups.end()) {
            groups.push_back({id, {i}});
        } else {
            it->second.push_back(i);
        }
    }
    return groups;
}

TrialSet subset(const TrialSet& set, const std::vector<std::size_t>& idx) {
    TrialSet out = set;
    out.trials.clear();
    for (std::size_t i : idx) out.trials.push_back(set.trials[i]);
    return out;
}

} // namespace

PreprocessedData run_preprocess(const TrialSet& train, const TrialSet& test,
                                const PreprocessSettings& settings) {
    PreprocessedData out;
    out.train = train;
    out.test = test;

    if (settings.filter_enabled) {
        const FirFilter filt =
            design_bandpass_fir(settings.fir_order, settings.f_lo, settings.f_hi, train.fs);
        out.train = filter_trials(out.train, filt);
        out.test = filter_trials(out.test, filt);
        out.edge_transient_samples = filt.order() / 2;
    }
    if (settings.window_seconds) {
        out.train = crop_window(out.train, settings.window_seconds->first,
                                settings.window_seconds->second);
        out.test = crop_window(out.test, settings.window_seconds->first,
                               settings.window_seconds->second);
    }
    if (settings.normalize) {
        out.train = normalize_trials(out.train);
        out.test = normalize_trials(out.test);
    }
    if (settings.align) {
        // Alignment per subject. Estimation trials depend on the scope.
        auto train_groups = by_subject(out.train);
        auto test_groups = by_subject(out.test);

        std::map<std::string, Matrix> alignments;
        for (const auto& [subject, idx] : train_groups) {
            TrialSet estimation = subset(out.train, idx);
            if (settings.align_scope == AlignScope::pooled) {
                for (const auto& [tsub, tidx] : test_groups) {
                    if (tsub != subject) continue;
                    for (std::size_t i : tidx) estimation.trials.push_back(out.test.trials[i]);
                }
            }
            alignments.emplace(subject, euclidean_align(estimation).alignment);
        }
        // Test-only subjects: estimate from their own test trials (label-free).
        for (const auto& [subject, idx] : test_groups) {
            if (alignments.count(subject)) continue;
            alignments.emplace(subject, euclidean_align(subset(out.test, idx)).alignment);
        }

        for (Trial& t : out.train.trials) {
            t.data = matmul(alignments.at(t.subject_id), t.data);
        }
        for (Trial& t : out.test.trials) {
            t.data = matmul(alignments.at(t.subject_id), t.data);
        }
    }
    return out;
}

} // namespace fz
