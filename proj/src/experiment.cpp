#include "experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <thread>

#include "checkpoint.hpp"
#include "error.hpp"
#include "loss.hpp"
#include "optim.hpp"
#include "preprocess.hpp"
#include "rng.hpp"
#include "synth.hpp"
#include "trial_io.hpp"

namespace fz {

namespace {

TrialSet filter_subjects(const TrialSet& set, const std::vector<std::string>& keep,
                         const char* split) {
    if (keep.empty()) return set;
    TrialSet out = set;
    out.trials.clear();
    for (const Trial& t : set.trials) {
        if (std::find(keep.begin(), keep.end(), t.subject_id) != keep.end()) {
            out.trials.push_back(t);
        }
    }
    if (out.trials.empty()) {
        throw ConfigError(std::string("subject filter left the ") + split + " split empty");
    }
    return out;
}

TrialSet load_concat(const std::vector<std::string>& paths) {
    TrialSet out;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        TrialSet part = load_trialset(paths[i]);
        // Tag trials with the file stem so subject filters and per-subject
        // alignment can distinguish multi-file imports.
        const std::string stem = std::filesystem::path(paths[i]).stem().string();
        for (Trial& t : part.trials) t.subject_id = stem;
        if (i == 0) {
            out = std::move(part);
        } else {
            if (part.channel_count != out.channel_count ||
                part.sample_count() != out.sample_count() || part.fs != out.fs) {
                throw FormatError("trial files disagree on shape or fs: " + paths[i]);
            }
            if (part.n_classes() > out.n_classes()) out.class_names = part.class_names;
            for (Trial& t : part.trials) out.trials.push_back(std::move(t));
        }
    }
    out.validate();
    return out;
}

std::vector<int> labels_of(const TrialSet& set, std::span<const std::size_t> indices) {
    std::vector<int> labels;
    labels.reserve(indices.size());
    for (std::size_t i : indices) labels.push_back(set.trials[i].label);
    return labels;
}

} // namespace

Matrix batch_from_trials(const TrialSet& set, std::span<const std::size_t> indices) {
    const std::size_t features = set.channel_count * set.sample_count();
    Matrix batch(indices.size(), features);
    for (std::size_t row = 0; row < indices.size(); ++row) {
        const Matrix& data = set.trials[indices[row]].data;
        double* dst = batch.row_ptr(row);
        for (std::size_t i = 0; i < data.size(); ++i) dst[i] = data.data()[i];
    }
    return batch;
}

LoadedData load_experiment_data(const ExperimentConfig& cfg) {
    LoadedData data;
    if (cfg.data.synthetic) {
        auto [train, test] = generate_synthetic(*cfg.data.synthetic);
        data.train = std::move(train);
        data.test = std::move(test);
    } else {
        data.train = load_concat(cfg.data.train_paths);
        data.test = load_concat(cfg.data.test_paths);
        if (data.train.channel_count != data.test.channel_count ||
            data.train.sample_count() != data.test.sample_count()) {
            throw FormatError("train and test trial files disagree on shape");
        }
    }
    data.train = filter_subjects(data.train, cfg.pooled_subjects, "train");
    data.test = filter_subjects(data.test, cfg.test_subjects, "test");
    if (data.train.n_classes() < 2) throw ConfigError("training data has fewer than 2 classes");
    return data;
}

LoadedData preprocess_experiment_data(const ExperimentConfig& cfg, const LoadedData& data) {
    const PreprocessSettings settings = cfg.preprocess_settings();
    PreprocessedData pre = run_preprocess(data.train, data.test, settings);
    return LoadedData{std::move(pre.train), std::move(pre.test)};
}

double evaluate_accuracy(Model& model, const TrialSet& test, std::size_t batch_size) {
    if (test.trials.empty()) throw DomainError("evaluate: empty test set");
    std::size_t correct = 0;
    std::vector<std::size_t> indices(test.trials.size());
    for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
    for (std::size_t start = 0; start < indices.size(); start += batch_size) {
        const std::size_t stop = std::min(indices.size(), start + batch_size);
        std::span<const std::size_t> chunk(indices.data() + start, stop - start);
        Matrix batch = batch_from_trials(test, chunk);
        Matrix logits = model.forward(batch, /*training=*/false);
        for (std::size_t row = 0; row < logits.rows(); ++row) {
            const double* vals = logits.row_ptr(row);
            std::size_t best = 0;
            for (std::size_t c = 1; c < logits.cols(); ++c) {
                if (vals[c] > vals[best]) best = c; // ties keep the lowest index
            }
            if (static_cast<int>(best) == test.trials[chunk[row]].label) ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(test.trials.size());
}

RunResult run_experiment_on(const ExperimentConfig& cfg, const TrialSet& train,
                            const TrialSet& test, const RunOptions& opts) {
    const auto t_start = std::chrono::steady_clock::now();
    train.validate();
    test.validate();
    if (train.n_classes() != test.n_classes()) {
        throw ConfigError("train and test splits disagree on class count");
    }

    const TensorShape input{train.channel_count, train.sample_count()};
    auto model = std::make_shared<Model>(cfg, input, train.n_classes());

    std::unique_ptr<Optimizer> optimizer;
    if (cfg.optimizer.kind == "adamw") {
        optimizer = std::make_unique<AdamWOptimizer>(cfg.optimizer.adamw);
    } else {
        optimizer = std::make_unique<SgdOptimizer>(cfg.optimizer.sgd_lr);
    }

    Rng shuffle_rng = derive_rng(cfg.seed, {hash_str("shuffle")});
    std::vector<EpochRecord> history;
    std::size_t start_epoch = 0;

    if (cfg.checkpoint.resume_from) {
        TrainingSnapshot snap =
            load_checkpoint(*cfg.checkpoint.resume_from, *model, *optimizer, cfg.config_hash());
        shuffle_rng = Rng::from_state(snap.shuffle_rng_state, snap.shuffle_rng_seed);
        history = std::move(snap.history);
        start_epoch = snap.completed_epochs;
        if (start_epoch > cfg.epochs) {
            throw ConfigError("checkpoint already has " + std::to_string(start_epoch) +
                              " epochs, config asks for " + std::to_string(cfg.epochs));
        }
    }

    const std::size_t n_train = train.trials.size();
    const double inv_n_train = 1.0 / static_cast<double>(n_train);
    std::vector<std::size_t> order(n_train);
    auto params = model->params();

    const std::size_t last_epoch = cfg.checkpoint.stop_after_epoch
                                       ? std::min(*cfg.checkpoint.stop_after_epoch, cfg.epochs)
                                       : cfg.epochs;

    for (std::size_t epoch = start_epoch + 1; epoch <= last_epoch; ++epoch) {
        for (std::size_t i = 0; i < n_train; ++i) order[i] = i;
        for (std::size_t i = n_train; i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(shuffle_rng.next_below(i));
            std::swap(order[i - 1], order[j]);
        }

        double epoch_loss_sum = 0.0; // sum-form loss over all samples
        std::size_t batch_index = 0;
        for (std::size_t start = 0; start < n_train; start += cfg.batch_size, ++batch_index) {
            const std::size_t stop = std::min(n_train, start + cfg.batch_size);
            std::span<const std::size_t> chunk(order.data() + start, stop - start);
            Matrix batch = batch_from_trials(train, chunk);
            const std::vector<int> targets = labels_of(train, chunk);

            model->zero_grads();
            Matrix logits = model->forward(batch, /*training=*/true);
            LossResult loss = softmax_cross_entropy(logits, targets, cfg.loss_reduction);
            if (!std::isfinite(loss.loss)) {
                throw NumericError("non-finite loss at epoch " + std::to_string(epoch) +
                                   ", batch " + std::to_string(batch_index));
            }
            epoch_loss_sum += cfg.loss_reduction == LossReduction::mean
                                  ? loss.loss * static_cast<double>(chunk.size())
                                  : loss.loss;
            model->backward(loss.grad_logits);
            optimizer->step(params);
            model->verify_freeze_invariants();
        }

        const double test_accuracy = evaluate_accuracy(*model, test, cfg.batch_size);
        history.push_back({epoch, epoch_loss_sum * inv_n_train, test_accuracy});

        if (!opts.quiet && (epoch % 100 == 0 || epoch == last_epoch)) {
            std::cerr << "epoch " << epoch << "/" << cfg.epochs
                      << " loss=" << history.back().train_loss
                      << " test_acc=" << test_accuracy << "\n";
        }

        if (cfg.checkpoint.save_at_epoch && *cfg.checkpoint.save_at_epoch == epoch) {
            TrainingSnapshot snap;
            snap.completed_epochs = epoch;
            snap.shuffle_rng_state = shuffle_rng.state();
            snap.shuffle_rng_seed = shuffle_rng.seed();
            snap.history = history;
            save_checkpoint(*cfg.checkpoint.save_path, *model, *optimizer, snap,
                            cfg.config_hash());
        }
    }

    RunResult result;
    result.model = std::move(model);
    MetricsReport& report = result.report;
    report.per_epoch = std::move(history);
    report.config_hash = cfg.config_hash();
    report.smooth_width = cfg.metrics.smooth_width;
    report.mask_stats = result.model->mask_stats();

    report.max_test_accuracy = 0.0;
    report.max_accuracy_epoch = 0;
    for (const EpochRecord& rec : report.per_epoch) {
        if (rec.test_accuracy > report.max_test_accuracy || report.max_accuracy_epoch == 0) {
            report.max_test_accuracy = rec.test_accuracy;
            report.max_accuracy_epoch = rec.epoch;
        }
    }
    if (cfg.metrics.median_window && !report.per_epoch.empty() &&
        cfg.metrics.median_window->second <= report.per_epoch.size()) {
        std::vector<double> acc;
        acc.reserve(report.per_epoch.size());
        for (const EpochRecord& rec : report.per_epoch) acc.push_back(rec.test_accuracy);
        report.median_test_accuracy =
            median_window(acc, cfg.metrics.median_window->first,
                          cfg.metrics.median_window->second);
        report.median_window_range = cfg.metrics.median_window;
    }

    const auto t_stop = std::chrono::steady_clock::now();
    report.runtime_seconds = std::chrono::duration<double>(t_stop - t_start).count();
    return result;
}

RunResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
    LoadedData data = load_experiment_data(cfg);
    data = preprocess_experiment_data(cfg, data);
    return run_experiment_on(cfg, data.train, data.test, opts);
}

namespace {

// Runs jobs 0..n-1 on up to `threads` workers; each job owns its slot.
void parallel_for_jobs(std::size_t n, int threads, const std::function<void(std::size_t)>& job) {
    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(threads), n));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) job(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                job(i);
            }
        });
    }
    for (std::thread& t : pool) t.join();
}

} // namespace

SweepResult threshold_sweep(const ExperimentConfig& cfg, std::vector<double> thresholds,
                            const RunOptions& opts) {
    if (thresholds.empty()) throw ConfigError("sweep: threshold list is empty");
    for (double t : thresholds) {
        if (!(t >= 0.0 && t <= 1.0)) {
            throw ConfigError("sweep: threshold " + std::to_string(t) + " outside [0,1]");
        }
    }
    std::sort(thresholds.begin(), thresholds.end());

    // Data is identical across cells; prepare it once and share it immutably.
    LoadedData data = load_experiment_data(cfg);
    data = preprocess_experiment_data(cfg, data);

    SweepResult result;
    result.cells.resize(thresholds.size());
    parallel_for_jobs(thresholds.size(), opts.threads, [&](std::size_t i) {
        SweepCell& cell = result.cells[i];
        cell.threshold_t = thresholds[i];
        ExperimentConfig run_cfg = cfg;
        run_cfg.classifier.mode =
            cfg.classifier.mode == "none" ? "frozen" : cfg.classifier.mode;
        run_cfg.classifier.threshold_t = thresholds[i];
        run_cfg.checkpoint = {}; // cells never share checkpoint files
        RunOptions run_opts = opts;
        run_opts.quiet = true;
        try {
            cell.report = run_experiment_on(run_cfg, data.train, data.test, run_opts).report;
            cell.ok = true;
        } catch (const std::exception& e) {
            cell.ok = false;
            cell.error = e.what();
        }
        if (!opts.quiet) {
            std::cerr << "sweep t=" << thresholds[i] << (cell.ok ? " done" : " FAILED") << "\n";
        }
    });
    return result;
}

CompareResult compare_before_after(const ExperimentConfig& cfg, double t,
                                   const RunOptions& opts) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw ConfigError("compare: threshold " + std::to_string(t) + " outside [0,1]");
    }
    LoadedData data = load_experiment_data(cfg);
    data = preprocess_experiment_data(cfg, data);

    ExperimentConfig base_cfg = cfg;
    base_cfg.classifier.mode = "none";
    base_cfg.checkpoint = {};
    ExperimentConfig frozen_cfg = cfg;
    frozen_cfg.classifier.mode = cfg.classifier.mode == "sparse" ? "sparse" : "frozen";
    frozen_cfg.classifier.threshold_t = t;
    frozen_cfg.checkpoint = {};

    CompareResult result;
    result.threshold_t = t;
    const ExperimentConfig* cfgs[2] = {&base_cfg, &frozen_cfg};
    MetricsReport* outs[2] = {&result.baseline, &result.frozen};
    RunOptions run_opts = opts;
    run_opts.quiet = true;
    parallel_for_jobs(2, opts.threads, [&](std::size_t i) {
        *outs[i] = run_experiment_on(*cfgs[i], data.train, data.test, run_opts).report;
    });
    return result;
}

} // namespace fz
