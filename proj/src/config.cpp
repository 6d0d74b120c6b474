#include "config.hpp"

#include <fstream>
#include <set>

#include "error.hpp"
#include "rng.hpp"

namespace fz {

using nlohmann::json;

namespace {

class Validator {
public:
    void fail(const std::string& msg) { errors_.push_back(msg); }

    void check_keys(const json& obj, const std::string& where,
                    const std::set<std::string>& allowed) {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            if (!allowed.count(it.key())) {
                fail(where + ": unknown key '" + it.key() + "'");
            }
        }
    }

    void finish() const {
        if (errors_.empty()) return;
        std::string msg = "invalid config (" + std::to_string(errors_.size()) + " problem" +
                          (errors_.size() == 1 ? "" : "s") + "):";
        for (std::size_t i = 0; i < errors_.size(); ++i) {
            msg += "\n  " + std::to_string(i + 1) + ". " + errors_[i];
        }
        throw ConfigError(msg);
    }

    bool ok() const { return errors_.empty(); }

private:
    std::vector<std::string> errors_;
};

template <typename T>
bool get_to(Validator& v, const json& obj, const std::string& where, const char* key, T& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return false;
    try {
        it->get_to(out);
        return true;
    } catch (const json::exception&) {
        v.fail(where + "." + key + ": wrong type");
        return false;
    }
}

std::vector<std::string> get_paths(Validator& v, const json& obj, const std::string& where,
                                   const char* key) {
    std::vector<std::string> out;
    auto it = obj.find(key);
    if (it == obj.end()) return out;
    if (it->is_string()) {
        out.push_back(it->get<std::string>());
    } else if (it->is_array()) {
        for (const auto& e : *it) {
            if (!e.is_string()) {
                v.fail(where + "." + key + ": array entries must be strings");
                return {};
            }
            out.push_back(e.get<std::string>());
        }
    } else {
        v.fail(where + "." + key + ": expected path or array of paths");
    }
    return out;
}

LayerSpec parse_layer(Validator& v, const json& j, std::size_t index) {
    const std::string where = "model[" + std::to_string(index) + "]";
    LayerSpec spec;
    if (!j.is_object()) {
        v.fail(where + ": expected an object");
        return spec;
    }
    if (!get_to(v, j, where, "kind", spec.kind)) {
        v.fail(where + ": missing 'kind'");
        return spec;
    }

    auto require = [&](const char* key, auto& out) {
        if (!get_to(v, j, where, key, out)) v.fail(where + ": missing '" + key + "'");
    };

    if (spec.kind == "conv1d") {
        v.check_keys(j, where, {"kind", "out_channels", "kernel_len", "stride"});
        require("out_channels", spec.out_channels);
        require("kernel_len", spec.kernel_len);
        spec.stride = 1;
        get_to(v, j, where, "stride", spec.stride);
    } else if (spec.kind == "channel_mix") {
        v.check_keys(j, where, {"kind", "units"});
        require("units", spec.units);
    } else if (spec.kind == "activation") {
        v.check_keys(j, where, {"kind", "fn"});
        require("fn", spec.fn);
        if (v.ok()) {
            try {
                activation_from_name(spec.fn);
            } catch (const Error& e) {
                v.fail(where + ": " + e.what());
            }
        }
    } else if (spec.kind == "pool") {
        v.check_keys(j, where, {"kind", "kernel_len", "stride"});
        require("kernel_len", spec.kernel_len);
        spec.stride = spec.kernel_len;
        get_to(v, j, where, "stride", spec.stride);
    } else if (spec.kind == "flatten") {
        v.check_keys(j, where, {"kind"});
    } else if (spec.kind == "dropout") {
        v.check_keys(j, where, {"kind", "p", "seed"});
        require("p", spec.p);
        std::uint64_t seed = 0;
        if (get_to(v, j, where, "seed", seed)) spec.seed = seed;
        if (!(spec.p >= 0.0 && spec.p < 1.0)) v.fail(where + ": p must lie in [0,1)");
    } else if (spec.kind == "dense") {
        v.check_keys(j, where, {"kind", "units", "init"});
        require("units", spec.units);
        get_to(v, j, where, "init", spec.init);
    } else if (spec.kind == "frozen_dense") {
        v.check_keys(j, where, {"kind", "units", "threshold_t", "mode", "init", "seed"});
        require("units", spec.units);
        require("threshold_t", spec.threshold_t);
        get_to(v, j, where, "mode", spec.mode);
        get_to(v, j, where, "init", spec.init);
        std::uint64_t seed = 0;
        if (get_to(v, j, where, "seed", seed)) spec.seed = seed;
        if (!(spec.threshold_t >= 0.0 && spec.threshold_t <= 1.0)) {
            v.fail(where + ": threshold_t must lie in [0,1]");
        }
        if (spec.mode != "frozen" && spec.mode != "sparse") {
            v.fail(where + ": mode must be 'frozen' or 'sparse'");
        }
    } else {
        v.fail(where + ": unknown layer kind '" + spec.kind + "'");
    }
    if (spec.init != "uniform" && spec.init != "zeros") {
        v.fail(where + ": init must be 'uniform' or 'zeros'");
    }
    return spec;
}

SynthConfig parse_synthetic(Validator& v, const json& j, std::uint64_t default_seed) {
    const std::string where = "data.synthetic";
    SynthConfig cfg;
    cfg.seed = default_seed;
    v.check_keys(j, where,
                 {"n_classes", "n_channels", "trial_seconds", "fs", "trials_per_class_train",
                  "trials_per_class_test", "snr_db", "seed", "t0_seconds", "subjects"});
    get_to(v, j, where, "n_classes", cfg.n_classes);
    get_to(v, j, where, "n_channels", cfg.n_channels);
    get_to(v, j, where, "trial_seconds", cfg.trial_seconds);
    get_to(v, j, where, "fs", cfg.fs);
    get_to(v, j, where, "trials_per_class_train", cfg.trials_per_class_train);
    get_to(v, j, where, "trials_per_class_test", cfg.trials_per_class_test);
    get_to(v, j, where, "snr_db", cfg.snr_db);
    get_to(v, j, where, "seed", cfg.seed);
    get_to(v, j, where, "t0_seconds", cfg.t0_seconds);
    get_to(v, j, where, "subjects", cfg.subjects);
    if (cfg.n_classes < 2) v.fail(where + ": n_classes must be >= 2");
    if (cfg.n_channels < 1) v.fail(where + ": n_channels must be >= 1");
    if (cfg.trials_per_class_train < 1 || cfg.trials_per_class_test < 1) {
        v.fail(where + ": trials_per_class counts must be >= 1");
    }
    if (!(cfg.fs > 0.0) || !(cfg.trial_seconds > 0.0)) {
        v.fail(where + ": fs and trial_seconds must be positive");
    }
    return cfg;
}

} // namespace

std::vector<LayerSpec> default_model_stack() {
    std::vector<LayerSpec> stack;
    LayerSpec conv;
    conv.kind = "conv1d";
    conv.out_channels = 6;
    conv.kernel_len = 25;
    conv.stride = 6;
    stack.push_back(conv);
    LayerSpec mix;
    mix.kind = "channel_mix";
    mix.units = 8;
    stack.push_back(mix);
    LayerSpec square;
    square.kind = "activation";
    square.fn = "square";
    stack.push_back(square);
    LayerSpec pool;
    pool.kind = "pool";
    pool.kernel_len = 20;
    pool.stride = 10;
    stack.push_back(pool);
    LayerSpec log;
    log.kind = "activation";
    log.fn = "log";
    stack.push_back(log);
    LayerSpec dropout;
    dropout.kind = "dropout";
    dropout.p = 0.5;
    stack.push_back(dropout);
    LayerSpec flatten;
    flatten.kind = "flatten";
    stack.push_back(flatten);
    return stack;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    Validator v;
    ExperimentConfig cfg;
    if (!j.is_object()) {
        v.fail("config root must be a JSON object");
        v.finish();
    }
    v.check_keys(j, "config",
                 {"model", "classifier", "optimizer", "loss_reduction", "epochs", "batch_size",
                  "seed", "data", "preprocess", "metrics", "pooled_subjects", "test_subjects",
                  "checkpoint", "sweep"});

    bool model_given = false;
    if (auto it = j.find("model"); it != j.end()) {
        if (!it->is_array()) {
            v.fail("model: expected an array of layer specs");
        } else {
            model_given = true; // an explicit empty array means classifier-only
            cfg.model.clear();
            for (std::size_t i = 0; i < it->size(); ++i) {
                cfg.model.push_back(parse_layer(v, (*it)[i], i));
            }
        }
    }

    if (auto it = j.find("classifier"); it != j.end()) {
        v.check_keys(*it, "classifier", {"mode", "threshold_t", "init", "mask_seed"});
        get_to(v, *it, "classifier", "mode", cfg.classifier.mode);
        get_to(v, *it, "classifier", "threshold_t", cfg.classifier.threshold_t);
        get_to(v, *it, "classifier", "init", cfg.classifier.init);
        std::uint64_t ms = 0;
        if (get_to(v, *it, "classifier", "mask_seed", ms)) cfg.classifier.mask_seed = ms;
    }
    if (cfg.classifier.mode != "none" && cfg.classifier.mode != "frozen" &&
        cfg.classifier.mode != "sparse") {
        v.fail("classifier.mode must be one of none|frozen|sparse");
    }
    if (!(cfg.classifier.threshold_t >= 0.0 && cfg.classifier.threshold_t <= 1.0)) {
        v.fail("classifier.threshold_t must lie in [0,1]");
    }
    if (cfg.classifier.init != "uniform" && cfg.classifier.init != "zeros") {
        v.fail("classifier.init must be 'uniform' or 'zeros'");
    }

    if (auto it = j.find("optimizer"); it != j.end()) {
        v.check_keys(*it, "optimizer",
                     {"kind", "lr", "beta1", "beta2", "eps", "weight_decay"});
        get_to(v, *it, "optimizer", "kind", cfg.optimizer.kind);
        double lr = 0.0;
        if (get_to(v, *it, "optimizer", "lr", lr)) {
            cfg.optimizer.adamw.lr = lr;
            cfg.optimizer.sgd_lr = lr;
        }
        get_to(v, *it, "optimizer", "beta1", cfg.optimizer.adamw.beta1);
        get_to(v, *it, "optimizer", "beta2", cfg.optimizer.adamw.beta2);
        get_to(v, *it, "optimizer", "eps", cfg.optimizer.adamw.eps);
        get_to(v, *it, "optimizer", "weight_decay", cfg.optimizer.adamw.weight_decay);
    }
    if (cfg.optimizer.kind != "adamw" && cfg.optimizer.kind != "sgd") {
        v.fail("optimizer.kind must be 'adamw' or 'sgd'");
    }
    if (!(cfg.optimizer.adamw.lr > 0.0) || !(cfg.optimizer.sgd_lr > 0.0)) {
        v.fail("optimizer.lr must be positive");
    }

    std::string reduction = "sum";
    get_to(v, j, "config", "loss_reduction", reduction);
    if (reduction == "sum") {
        cfg.loss_reduction = LossReduction::sum;
    } else if (reduction == "mean") {
        cfg.loss_reduction = LossReduction::mean;
    } else {
        v.fail("loss_reduction must be 'sum' or 'mean'");
    }

    get_to(v, j, "config", "epochs", cfg.epochs);
    get_to(v, j, "config", "batch_size", cfg.batch_size);
    get_to(v, j, "config", "seed", cfg.seed);
    if (cfg.epochs < 1) v.fail("epochs must be >= 1");
    if (cfg.batch_size < 1) v.fail("batch_size must be >= 1");

    if (auto it = j.find("data"); it != j.end()) {
        v.check_keys(*it, "data", {"synthetic", "train", "test"});
        const bool has_synth = it->contains("synthetic");
        cfg.data.train_paths = get_paths(v, *it, "data", "train");
        cfg.data.test_paths = get_paths(v, *it, "data", "test");
        const bool has_files = !cfg.data.train_paths.empty() || !cfg.data.test_paths.empty();
        if (has_synth && has_files) {
            v.fail("data: 'synthetic' and file paths are mutually exclusive");
        } else if (has_files && (cfg.data.train_paths.empty() || cfg.data.test_paths.empty())) {
            v.fail("data: file mode needs both 'train' and 'test' paths");
        }
        if (has_synth) {
            if (!(*it)["synthetic"].is_object()) {
                v.fail("data.synthetic: expected an object");
            } else {
                cfg.data.synthetic = parse_synthetic(v, (*it)["synthetic"], cfg.seed);
            }
        }
        if (!has_synth && !has_files) v.fail("data: provide 'synthetic' or train/test paths");
    } else {
        cfg.data.synthetic = SynthConfig{};
        cfg.data.synthetic->seed = cfg.seed;
    }

    if (auto it = j.find("preprocess"); it != j.end()) {
        v.check_keys(*it, "preprocess",
                     {"enabled", "filter", "band", "fir_order", "normalize", "align",
                      "window_seconds"});
        cfg.preprocess.enabled = true;
        get_to(v, *it, "preprocess", "enabled", cfg.preprocess.enabled);
        get_to(v, *it, "preprocess", "filter", cfg.preprocess.filter);
        std::vector<double> band;
        if (get_to(v, *it, "preprocess", "band", band)) {
            if (band.size() != 2 || !(band[0] < band[1])) {
                v.fail("preprocess.band must be [f_lo, f_hi] with f_lo < f_hi");
            } else {
                cfg.preprocess.f_lo = band[0];
                cfg.preprocess.f_hi = band[1];
            }
        }
        get_to(v, *it, "preprocess", "fir_order", cfg.preprocess.fir_order);
        get_to(v, *it, "preprocess", "normalize", cfg.preprocess.normalize);
        get_to(v, *it, "preprocess", "align", cfg.preprocess.align);
        if (cfg.preprocess.align != "per_split" && cfg.preprocess.align != "pooled" &&
            cfg.preprocess.align != "none") {
            v.fail("preprocess.align must be per_split|pooled|none");
        }
        std::vector<double> window;
        if (get_to(v, *it, "preprocess", "window_seconds", window)) {
            if (window.size() != 2 || !(window[0] < window[1])) {
                v.fail("preprocess.window_seconds must be [start, end] with start < end");
            } else {
                cfg.preprocess.window_seconds = {window[0], window[1]};
            }
        }
        if (cfg.preprocess.fir_order < 2 || cfg.preprocess.fir_order % 2 != 0) {
            v.fail("preprocess.fir_order must be even and >= 2");
        }
    }

    if (auto it = j.find("metrics"); it != j.end()) {
        v.check_keys(*it, "metrics", {"median_window", "smooth_width"});
        if (auto mw = it->find("median_window"); mw != it->end()) {
            if (mw->is_null()) {
                cfg.metrics.median_window.reset();
            } else {
                std::vector<std::size_t> range;
                try {
                    mw->get_to(range);
                } catch (const json::exception&) {
                    v.fail("metrics.median_window: expected [lo, hi] or null");
                }
                if (range.size() == 2 && range[0] >= 1 && range[0] < range[1]) {
                    cfg.metrics.median_window = {range[0], range[1]};
                } else if (!range.empty() || (mw->is_array() && mw->size() != 2)) {
                    v.fail("metrics.median_window must satisfy 1 <= lo < hi");
                }
            }
        }
        get_to(v, *it, "metrics", "smooth_width", cfg.metrics.smooth_width);
        if (cfg.metrics.smooth_width < 1) v.fail("metrics.smooth_width must be >= 1");
    }
    if (cfg.metrics.median_window && cfg.metrics.median_window->second > cfg.epochs) {
        v.fail("metrics.median_window end " + std::to_string(cfg.metrics.median_window->second) +
               " exceeds epochs " + std::to_string(cfg.epochs) +
               " (raise epochs or set metrics.median_window to null)");
    }

    get_to(v, j, "config", "pooled_subjects", cfg.pooled_subjects);
    get_to(v, j, "config", "test_subjects", cfg.test_subjects);

    if (auto it = j.find("checkpoint"); it != j.end()) {
        v.check_keys(*it, "checkpoint",
                     {"save_path", "save_at_epoch", "stop_after_epoch", "resume_from"});
        std::string s;
        if (get_to(v, *it, "checkpoint", "save_path", s)) cfg.checkpoint.save_path = s;
        std::size_t n = 0;
        if (get_to(v, *it, "checkpoint", "save_at_epoch", n)) cfg.checkpoint.save_at_epoch = n;
        if (get_to(v, *it, "checkpoint", "stop_after_epoch", n)) {
            cfg.checkpoint.stop_after_epoch = n;
        }
        if (get_to(v, *it, "checkpoint", "resume_from", s)) cfg.checkpoint.resume_from = s;
        if (cfg.checkpoint.save_at_epoch && !cfg.checkpoint.save_path) {
            v.fail("checkpoint.save_at_epoch needs checkpoint.save_path");
        }
    }

    if (auto it = j.find("sweep"); it != j.end()) {
        v.check_keys(*it, "sweep", {"thresholds"});
        std::vector<double> ts;
        if (get_to(v, *it, "sweep", "thresholds", ts)) {
            if (ts.empty()) v.fail("sweep.thresholds must not be empty");
            for (double t : ts) {
                if (!(t >= 0.0 && t <= 1.0)) v.fail("sweep.thresholds entries must lie in [0,1]");
            }
            cfg.sweep_thresholds = ts;
        }
    }

    v.finish();
    if (!model_given && cfg.model.empty()) cfg.model = default_model_stack();
    return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return from_json(j);
}

nlohmann::json ExperimentConfig::to_canonical_json() const {
    json j;
    json model = json::array();
    for (const LayerSpec& l : this->model) {
        json e;
        e["kind"] = l.kind;
        if (l.kind == "conv1d") {
            e["out_channels"] = l.out_channels;
            e["kernel_len"] = l.kernel_len;
            e["stride"] = l.stride;
        } else if (l.kind == "channel_mix") {
            e["units"] = l.units;
        } else if (l.kind == "activation") {
            e["fn"] = l.fn;
        } else if (l.kind == "pool") {
            e["kernel_len"] = l.kernel_len;
            e["stride"] = l.stride;
        } else if (l.kind == "dropout") {
            e["p"] = l.p;
            if (l.seed) e["seed"] = *l.seed;
        } else if (l.kind == "dense") {
            e["units"] = l.units;
            e["init"] = l.init;
        } else if (l.kind == "frozen_dense") {
            e["units"] = l.units;
            e["threshold_t"] = l.threshold_t;
            e["mode"] = l.mode;
            e["init"] = l.init;
            if (l.seed) e["seed"] = *l.seed;
        }
        model.push_back(e);
    }
    j["model"] = model;

    j["classifier"] = {{"mode", classifier.mode},
                       {"threshold_t", classifier.threshold_t},
                       {"init", classifier.init}};
    if (classifier.mask_seed) j["classifier"]["mask_seed"] = *classifier.mask_seed;

    if (optimizer.kind == "adamw") {
        j["optimizer"] = {{"kind", "adamw"},          {"lr", optimizer.adamw.lr},
                          {"beta1", optimizer.adamw.beta1}, {"beta2", optimizer.adamw.beta2},
                          {"eps", optimizer.adamw.eps},
                          {"weight_decay", optimizer.adamw.weight_decay}};
    } else {
        j["optimizer"] = {{"kind", "sgd"}, {"lr", optimizer.sgd_lr}};
    }

    j["loss_reduction"] = loss_reduction == LossReduction::sum ? "sum" : "mean";
    j["epochs"] = epochs;
    j["batch_size"] = batch_size;
    j["seed"] = seed;

    if (data.synthetic) {
        const SynthConfig& s = *data.synthetic;
        j["data"]["synthetic"] = {{"n_classes", s.n_classes},
                                  {"n_channels", s.n_channels},
                                  {"trial_seconds", s.trial_seconds},
                                  {"fs", s.fs},
                                  {"trials_per_class_train", s.trials_per_class_train},
                                  {"trials_per_class_test", s.trials_per_class_test},
                                  {"snr_db", s.snr_db},
                                  {"seed", s.seed},
                                  {"t0_seconds", s.t0_seconds},
                                  {"subjects", s.subjects}};
    } else {
        j["data"] = {{"train", data.train_paths}, {"test", data.test_paths}};
    }

    j["preprocess"] = {{"enabled", preprocess.enabled},
                       {"filter", preprocess.filter},
                       {"band", {preprocess.f_lo, preprocess.f_hi}},
                       {"fir_order", preprocess.fir_order},
                       {"normalize", preprocess.normalize},
                       {"align", preprocess.align}};
    if (preprocess.window_seconds) {
        j["preprocess"]["window_seconds"] = {preprocess.window_seconds->first,
                                             preprocess.window_seconds->second};
    }

    if (metrics.median_window) {
        j["metrics"]["median_window"] = {metrics.median_window->first,
                                         metrics.median_window->second};
    } else {
        j["metrics"]["median_window"] = nullptr;
    }
    j["metrics"]["smooth_width"] = metrics.smooth_width;

    j["pooled_subjects"] = pooled_subjects;
    j["test_subjects"] = test_subjects;
    j["sweep"] = {{"thresholds", sweep_thresholds}};
    return j;
}

std::string ExperimentConfig::config_hash() const {
    const std::string dump = to_canonical_json().dump();
    const std::uint64_t h = hash_str(dump);
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

PreprocessSettings ExperimentConfig::preprocess_settings() const {
    PreprocessSettings s;
    s.filter_enabled = preprocess.enabled && preprocess.filter;
    s.f_lo = preprocess.f_lo;
    s.f_hi = preprocess.f_hi;
    s.fir_order = preprocess.fir_order;
    s.normalize = preprocess.enabled && preprocess.normalize;
    s.align = preprocess.enabled && preprocess.align != "none";
    s.align_scope =
        preprocess.align == "pooled" ? AlignScope::pooled : AlignScope::per_split;
    if (preprocess.enabled) s.window_seconds = preprocess.window_seconds;
    return s;
}

} // namespace fz
