#include "synth.hpp"

#include <cmath>
#include <string>

#include "error.hpp"
#include "rng.hpp"

namespace fz {

namespace {

struct SpatialPatterns {
    Matrix mixing; // n_classes x n_channels, entries in [-1, 1)
};

SpatialPatterns draw_patterns(const SynthConfig& cfg, std::uint64_t subject_key) {
    Rng rng = derive_rng(cfg.seed, {hash_str("spatial"), subject_key});
    SpatialPatterns p{Matrix(cfg.n_classes, cfg.n_channels)};
    for (std::size_t i = 0; i < p.mixing.size(); ++i) {
        p.mixing.data()[i] = 2.0 * rng.next_uniform() - 1.0;
    }
    return p;
}

Trial make_trial(const SynthConfig& cfg, const SpatialPatterns& patterns, std::size_t klass,
                 Rng& rng, const std::string& subject, const std::string& session) {
    const std::size_t samples =
        static_cast<std::size_t>(std::llround(cfg.trial_seconds * cfg.fs));
    const double f_k = cfg.class_frequency(klass);
    const double phase = 2.0 * M_PI * rng.next_uniform();

    // Raised-cosine onset over the first half second (capped at half the trial).
    const double t_on = std::min(0.5, cfg.trial_seconds / 2.0);
    const std::size_t onset_samples =
        static_cast<std::size_t>(std::llround(t_on * cfg.fs));

    Trial trial;
    trial.label = static_cast<int>(klass);
    trial.subject_id = subject;
    trial.session_id = session;
    trial.data = Matrix(cfg.n_channels, samples);

    double signal_power = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        const double t = static_cast<double>(s) / cfg.fs;
        double env = 1.0;
        if (s < onset_samples && onset_samples > 0) {
            env = 0.5 * (1.0 - std::cos(M_PI * static_cast<double>(s) /
                                        static_cast<double>(onset_samples)));
        }
        const double osc = env * std::sin(2.0 * M_PI * f_k * t + phase);
        for (std::size_t ch = 0; ch < cfg.n_channels; ++ch) {
            const double v = patterns.mixing(klass, ch) * osc;
            trial.data(ch, s) = v;
            signal_power += v * v;
        }
    }

    Matrix noise(cfg.n_channels, samples);
    double noise_power = 0.0;
    for (std::size_t i = 0; i < noise.size(); ++i) {
        const double v = rng.next_gaussian();
        noise.data()[i] = v;
        noise_power += v * v;
    }
    // Scale noise so that signal power / noise power hits snr_db exactly.
    const double target_ratio = std::pow(10.0, cfg.snr_db / 10.0);
    const double scale =
        noise_power > 0.0 ? std::sqrt(signal_power / (noise_power * target_ratio)) : 0.0;
    for (std::size_t i = 0; i < noise.size(); ++i) {
        trial.data.data()[i] += noise.data()[i] * scale;
    }
    return trial;
}

void shuffle_trials(std::vector<Trial>& trials, Rng& rng) {
    for (std::size_t i = trials.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
        std::swap(trials[i - 1], trials[j]);
    }
}

TrialSet make_split(const SynthConfig& cfg, const std::vector<std::string>& subjects,
                    std::size_t trials_per_class, const char* split_name) {
    TrialSet set;
    set.fs = cfg.fs;
    set.channel_count = cfg.n_channels;
    set.class_names = default_class_names(cfg.n_classes);
    set.t0_seconds = cfg.t0_seconds;
    for (const std::string& subject : subjects) {
        const std::uint64_t subject_key = hash_str(subject);
        const SpatialPatterns patterns = draw_patterns(cfg, subject_key);
        Rng rng = derive_rng(cfg.seed, {hash_str(split_name), subject_key});
        std::vector<Trial> trials;
        for (std::size_t k = 0; k < cfg.n_classes; ++k) {
            for (std::size_t i = 0; i < trials_per_class; ++i) {
                trials.push_back(make_trial(cfg, patterns, k, rng, subject, split_name));
            }
        }
        Rng shuffle_rng =
            derive_rng(cfg.seed, {hash_str("shuffle"), hash_str(split_name), subject_key});
        shuffle_trials(trials, shuffle_rng);
        for (Trial& t : trials) set.trials.push_back(std::move(t));
    }
    set.validate();
    return set;
}

} // namespace

std::pair<TrialSet, TrialSet> generate_synthetic(const SynthConfig& cfg) {
    if (cfg.n_classes < 2) throw DomainError("synthetic: need at least 2 classes");
    if (cfg.n_channels < 1 || cfg.trials_per_class_train < 1 || cfg.trials_per_class_test < 1) {
        throw DomainError("synthetic: counts must be >= 1");
    }
    const double f_max = cfg.class_frequency(cfg.n_classes - 1);
    if (f_max >= cfg.fs / 2.0) {
        throw ConfigError("synthetic: top class frequency " + std::to_string(f_max) +
                          " Hz reaches the Nyquist rate of fs=" + std::to_string(cfg.fs));
    }
    if (std::llround(cfg.trial_seconds * cfg.fs) < 1) {
        throw DomainError("synthetic: trial shorter than one sample");
    }

    std::vector<std::string> subjects = cfg.subjects;
    if (subjects.empty()) subjects = {"S0"};

    TrialSet train = make_split(cfg, subjects, cfg.trials_per_class_train, "train");
    TrialSet test = make_split(cfg, subjects, cfg.trials_per_class_test, "test");
    return {std::move(train), std::move(test)};
}

} // namespace fz
