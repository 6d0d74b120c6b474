#include "runner.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "binary_io.hpp"
#include "config.hpp"
#include "error.hpp"
#include "experiment.hpp"
#include "report.hpp"
#include "trial_io.hpp"

namespace fz::runner {

namespace {

using nlohmann::json;

int resolve_threads(const Options& opts) {
    if (opts.threads > 0) return opts.threads;
    if (const char* env = std::getenv("FREEZENET_THREADS")) {
        int n = 0;
        const auto [ptr, ec] = std::from_chars(env, env + std::string_view(env).size(), n);
        if (ec == std::errc() && n > 0) return n;
    }
    return 1;
}

ExperimentConfig load_config(const std::string& config_path, const Options& opts) {
    std::ifstream in(config_path);
    if (!in) throw IoError("cannot open config '" + config_path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config '" + config_path + "' is not valid JSON: " + e.what());
    }
    // Seed override happens before parsing so that a synthetic seed that
    // defaults to the run seed follows the override too.
    if (opts.seed_override) {
        if (j.is_object()) j["seed"] = *opts.seed_override;
    }
    return ExperimentConfig::from_json(j);
}

RunOptions to_run_options(const Options& opts) {
    RunOptions ro;
    ro.threads = resolve_threads(opts);
    ro.quiet = opts.quiet;
    return ro;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
}

} // namespace

void generate(const std::string& config_path, const std::string& out_dir, const Options& opts) {
    ExperimentConfig cfg = load_config(config_path, opts);
    if (!cfg.data.synthetic) {
        throw ConfigError("generate: config must use data.synthetic");
    }
    ensure_dir(out_dir);
    LoadedData data = load_experiment_data(cfg);
    save_trialset(data.train, out_dir + "/train.frz");
    save_trialset(data.test, out_dir + "/test.frz");
    if (!opts.quiet) {
        std::cout << "wrote " << data.train.trials.size() << " train and "
                  << data.test.trials.size() << " test trials to " << out_dir << "\n";
    }
}

void preprocess(const std::string& config_path, const std::string& out_dir,
                const Options& opts) {
    ExperimentConfig cfg = load_config(config_path, opts);
    ensure_dir(out_dir);
    LoadedData data = load_experiment_data(cfg);
    const PreprocessSettings settings = cfg.preprocess_settings();
    PreprocessedData pre = run_preprocess(data.train, data.test, settings);
    save_trialset(pre.train, out_dir + "/train_pre.frz");
    save_trialset(pre.test, out_dir + "/test_pre.frz");

    json meta;
    meta["filter"] = settings.filter_enabled;
    if (settings.filter_enabled) {
        meta["band"] = {settings.f_lo, settings.f_hi};
        meta["fir_order"] = settings.fir_order;
        meta["edge_transient_samples"] = pre.edge_transient_samples;
    }
    meta["normalize"] = settings.normalize;
    meta["align"] = settings.align
                        ? (settings.align_scope == AlignScope::pooled ? "pooled" : "per_split")
                        : "none";
    if (settings.window_seconds) {
        meta["window_seconds"] = {settings.window_seconds->first,
                                  settings.window_seconds->second};
    }
    meta["config_hash"] = cfg.config_hash();
    write_file_atomic(out_dir + "/preprocess.json", meta.dump(2) + "\n");
    if (!opts.quiet) std::cout << "preprocessed trials written to " << out_dir << "\n";
}

void train(const std::string& config_path, const std::string& out_dir, const Options& opts) {
    ExperimentConfig cfg = load_config(config_path, opts);
    RunResult result = run_experiment(cfg, to_run_options(opts));
    emit_report(result.report, out_dir);
    if (!opts.quiet) {
        std::cout << "max test accuracy " << result.report.max_test_accuracy << " at epoch "
                  << result.report.max_accuracy_epoch << "; report in " << out_dir << "\n";
    }
}

void sweep(const std::string& config_path, const std::string& out_dir, const Options& opts) {
    ExperimentConfig cfg = load_config(config_path, opts);
    SweepResult result = threshold_sweep(cfg, cfg.sweep_thresholds, to_run_options(opts));
    emit_sweep(result, cfg, out_dir);
    bool any_failed = false;
    for (const SweepCell& cell : result.cells) any_failed |= !cell.ok;
    if (!opts.quiet) {
        std::cout << "sweep over " << result.cells.size() << " thresholds written to " << out_dir
                  << (any_failed ? " (some cells failed)" : "") << "\n";
    }
}

void compare(const std::string& config_path, const std::string& out_dir, const Options& opts) {
    ExperimentConfig cfg = load_config(config_path, opts);
    if (cfg.epochs < cfg.metrics.smooth_width) {
        throw ConfigError("compare: epochs must be >= metrics.smooth_width for the smoothed "
                          "curves");
    }
    CompareResult result = compare_before_after(cfg, cfg.classifier.threshold_t,
                                                to_run_options(opts));
    emit_compare(result, cfg, out_dir);
    if (!opts.quiet) {
        std::cout << "baseline max " << result.baseline.max_test_accuracy << ", frozen max "
                  << result.frozen.max_test_accuracy << "; report in " << out_dir << "\n";
    }
}

void report(const std::string& run_dir, const Options& opts) {
    rerender_report(run_dir, opts.quiet);
}

} // namespace fz::runner
