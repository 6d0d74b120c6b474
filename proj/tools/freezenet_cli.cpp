// Command-line front end; links only the C API.

#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "freezenet.h"

namespace {

struct VerbArgs {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    bool has_seed = false;
    int threads = 0;
    bool quiet = false;
};

fz_run_options to_options(const VerbArgs& args) {
    fz_run_options opts{};
    opts.seed = args.seed;
    opts.has_seed = args.has_seed ? 1 : 0;
    opts.threads = args.threads;
    opts.quiet = args.quiet ? 1 : 0;
    return opts;
}

CLI::App* add_verb(CLI::App& app, VerbArgs& args, const char* name, const char* desc,
                   bool needs_config) {
    CLI::App* verb = app.add_subcommand(name, desc);
    auto* config = verb->add_option("--config", args.config, "experiment config (JSON)");
    if (needs_config) config->required();
    verb->add_option("--out", args.out, "output directory")->required();
    verb->add_option("--seed", args.seed, "override the config seed")
        ->each([&args](const std::string&) { args.has_seed = true; });
    verb->add_option("--threads", args.threads,
                     "parallel runs for sweep/compare (FREEZENET_THREADS as fallback)");
    verb->add_flag("--quiet", args.quiet, "suppress progress output");
    return verb;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"freezenet: deterministic weight-freezing training experiments"};
    app.require_subcommand(1);

    VerbArgs args;
    CLI::App* generate = add_verb(app, args, "generate", "write synthetic trial files", true);
    CLI::App* preprocess =
        add_verb(app, args, "preprocess", "filter/normalize/align trial files", true);
    CLI::App* train = add_verb(app, args, "train", "run one training experiment", true);
    CLI::App* sweep = add_verb(app, args, "sweep", "run the freeze-threshold sweep", true);
    CLI::App* compare =
        add_verb(app, args, "compare", "baseline vs weight-freezing comparison", true);
    CLI::App* report =
        add_verb(app, args, "report", "re-render charts for an existing run directory", false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1; // usage problems are config errors
    }

    fz_context* ctx = fz_context_new();
    if (!ctx) {
        std::fprintf(stderr, "error: out of memory\n");
        return FZ_ERR_INTERNAL;
    }
    const fz_run_options opts = to_options(args);

    fz_status status = FZ_OK;
    if (generate->parsed()) {
        status = fz_generate(ctx, args.config.c_str(), args.out.c_str(), &opts);
    } else if (preprocess->parsed()) {
        status = fz_preprocess(ctx, args.config.c_str(), args.out.c_str(), &opts);
    } else if (train->parsed()) {
        status = fz_train(ctx, args.config.c_str(), args.out.c_str(), &opts);
    } else if (sweep->parsed()) {
        status = fz_sweep(ctx, args.config.c_str(), args.out.c_str(), &opts);
    } else if (compare->parsed()) {
        status = fz_compare(ctx, args.config.c_str(), args.out.c_str(), &opts);
    } else if (report->parsed()) {
        status = fz_report(ctx, args.out.c_str(), &opts);
    }

    if (status != FZ_OK) {
        std::fprintf(stderr, "error: %s\n", fz_last_error(ctx));
    }
    fz_context_free(ctx);
    return static_cast<int>(status);
}
