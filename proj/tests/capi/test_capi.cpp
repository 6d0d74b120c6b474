// Exercises the shared-library surface the CLI is built on: context
// lifecycle, status-code mapping, verb round trips and trial-set handles.

#include <cassert>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include <unistd.h>

#include "freezenet.h"

namespace {

int failures = 0;

void check(bool ok, const char* what) {
    if (!ok) {
        std::fprintf(stderr, "FAIL: %s\n", what);
        ++failures;
    }
}

std::string write_config(const std::filesystem::path& dir) {
    const std::string path = (dir / "config.json").string();
    std::ofstream out(path);
    out << R"({
        "model": [],
        "epochs": 4,
        "batch_size": 8,
        "seed": 9,
        "data": {"synthetic": {"n_classes": 2, "n_channels": 3, "trial_seconds": 0.5,
                               "fs": 64, "trials_per_class_train": 6,
                               "trials_per_class_test": 6}},
        "metrics": {"median_window": null},
        "preprocess": {"enabled": false}
    })";
    return path;
}

} // namespace

int main() {
    namespace fs = std::filesystem;
    const fs::path dir =
        fs::temp_directory_path() / ("fzcapi_" + std::to_string(::getpid()));
    fs::create_directories(dir);

    fz_context* ctx = fz_context_new();
    check(ctx != nullptr, "context allocates");
    check(std::strlen(fz_last_error(ctx)) == 0, "fresh context has no error");
    check(std::strcmp(fz_version(), "") != 0, "version string present");

    // Status mapping: missing config file -> data error with a message.
    fz_status st = fz_train(ctx, (dir / "missing.json").string().c_str(),
                            (dir / "out").string().c_str(), nullptr);
    check(st == FZ_ERR_DATA, "missing config maps to FZ_ERR_DATA");
    check(std::strlen(fz_last_error(ctx)) > 0, "error message recorded");

    // Invalid JSON -> config error.
    {
        const std::string bad = (dir / "bad.json").string();
        std::ofstream(bad) << "{ not json";
        st = fz_train(ctx, bad.c_str(), (dir / "out").string().c_str(), nullptr);
        check(st == FZ_ERR_CONFIG, "bad json maps to FZ_ERR_CONFIG");
    }

    const std::string config = write_config(dir);

    // generate -> train -> report round trip.
    fz_run_options opts{};
    opts.quiet = 1;
    st = fz_generate(ctx, config.c_str(), (dir / "data").string().c_str(), &opts);
    check(st == FZ_OK, "generate succeeds");
    check(fs::exists(dir / "data/train.frz"), "generate writes train.frz");

    st = fz_train(ctx, config.c_str(), (dir / "run").string().c_str(), &opts);
    check(st == FZ_OK, "train succeeds");
    check(fs::exists(dir / "run/metrics.csv"), "train writes metrics.csv");
    check(fs::exists(dir / "run/summary.json"), "train writes summary.json");
    check(fs::exists(dir / "run/accuracy.svg"), "train writes accuracy.svg");

    st = fz_report(ctx, (dir / "run").string().c_str(), &opts);
    check(st == FZ_OK, "report succeeds");

    // Trial-set handle round trip.
    fz_trialset* set = nullptr;
    st = fz_trialset_load(ctx, (dir / "data/train.frz").string().c_str(), &set);
    check(st == FZ_OK && set != nullptr, "trialset loads");
    check(fz_trialset_trials(set) == 12, "trial count");
    check(fz_trialset_channels(set) == 3, "channel count");
    check(fz_trialset_classes(set) == 2, "class count");
    check(fz_trialset_fs(set) == 64.0, "sampling rate");
    check(fz_trialset_label(set, 0) >= 0, "label accessor");
    check(fz_trialset_label(set, 9999) == -1, "label out of range");

    const size_t n = fz_trialset_channels(set) * fz_trialset_samples(set);
    std::string buf(n * sizeof(double), '\0');
    st = fz_trialset_copy_trial(ctx, set, 0, reinterpret_cast<double*>(buf.data()), n);
    check(st == FZ_OK, "copy_trial succeeds");
    st = fz_trialset_copy_trial(ctx, set, 0, reinterpret_cast<double*>(buf.data()), 1);
    check(st == FZ_ERR_CONFIG, "short buffer rejected");

    st = fz_trialset_save(ctx, set, (dir / "copy.frz").string().c_str());
    check(st == FZ_OK, "trialset saves");
    fz_trialset_free(set);

    // Saved copy is byte-identical to the original container.
    {
        std::ifstream a(dir / "data/train.frz", std::ios::binary);
        std::ifstream b(dir / "copy.frz", std::ios::binary);
        std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
        std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
        check(sa == sb, "save(load(x)) is byte-identical");
    }

    fz_context_free(ctx);
    fz_context_free(nullptr); // must be a no-op

    std::error_code ec;
    fs::remove_all(dir, ec);

    if (failures == 0) std::printf("capi: all checks passed\n");
    return failures == 0 ? 0 : 1;
}
