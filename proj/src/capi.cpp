#include "freezenet.h"

#include <exception>
#include <string>

#include "error.hpp"
#include "runner.hpp"
#include "trial_io.hpp"
#include "trialset.hpp"

struct fz_context {
    std::string last_error;
};

struct fz_trialset {
    fz::TrialSet set;
};

namespace {

fz_status status_of(const fz::Error& e) {
    switch (e.kind()) {
    case fz::Error::Kind::config: return FZ_ERR_CONFIG;
    case fz::Error::Kind::data: return FZ_ERR_DATA;
    case fz::Error::Kind::numeric: return FZ_ERR_NUMERIC;
    case fz::Error::Kind::internal: return FZ_ERR_INTERNAL;
    }
    return FZ_ERR_INTERNAL;
}

template <typename Fn>
fz_status guarded(fz_context* ctx, Fn&& fn) {
    if (ctx) ctx->last_error.clear();
    try {
        fn();
        return FZ_OK;
    } catch (const fz::Error& e) {
        if (ctx) ctx->last_error = e.what();
        return status_of(e);
    } catch (const std::exception& e) {
        if (ctx) ctx->last_error = e.what();
        return FZ_ERR_INTERNAL;
    } catch (...) {
        if (ctx) ctx->last_error = "unknown error";
        return FZ_ERR_INTERNAL;
    }
}

fz::runner::Options to_options(const fz_run_options* opts) {
    fz::runner::Options o;
    if (opts) {
        if (opts->has_seed) o.seed_override = opts->seed;
        o.threads = opts->threads;
        o.quiet = opts->quiet != 0;
    }
    return o;
}

fz_status require(fz_context* ctx, bool cond, const char* msg) {
    if (cond) return FZ_OK;
    if (ctx) ctx->last_error = msg;
    return FZ_ERR_CONFIG;
}

} // namespace

extern "C" {

fz_context* fz_context_new(void) {
    return new (std::nothrow) fz_context{};
}

void fz_context_free(fz_context* ctx) {
    delete ctx;
}

const char* fz_last_error(const fz_context* ctx) {
    return ctx ? ctx->last_error.c_str() : "";
}

#define FZ_VERB(name)                                                                          \
    fz_status fz_##name(fz_context* ctx, const char* config_path, const char* out_dir,        \
                        const fz_run_options* opts) {                                          \
        if (fz_status s = require(ctx, config_path != nullptr, #name ": config_path is null"); \
            s != FZ_OK)                                                                        \
            return s;                                                                          \
        if (fz_status s = require(ctx, out_dir != nullptr, #name ": out_dir is null");         \
            s != FZ_OK)                                                                        \
            return s;                                                                          \
        return guarded(ctx, [&] { fz::runner::name(config_path, out_dir, to_options(opts)); });\
    }

FZ_VERB(generate)
FZ_VERB(preprocess)
FZ_VERB(train)
FZ_VERB(sweep)
FZ_VERB(compare)

#undef FZ_VERB

fz_status fz_report(fz_context* ctx, const char* run_dir, const fz_run_options* opts) {
    if (fz_status s = require(ctx, run_dir != nullptr, "report: run_dir is null"); s != FZ_OK) {
        return s;
    }
    return guarded(ctx, [&] { fz::runner::report(run_dir, to_options(opts)); });
}

fz_status fz_trialset_load(fz_context* ctx, const char* path, fz_trialset** out) {
    if (fz_status s = require(ctx, path && out, "trialset_load: null argument"); s != FZ_OK) {
        return s;
    }
    *out = nullptr;
    return guarded(ctx, [&] { *out = new fz_trialset{fz::load_trialset(path)}; });
}

fz_status fz_trialset_save(fz_context* ctx, const fz_trialset* set, const char* path) {
    if (fz_status s = require(ctx, set && path, "trialset_save: null argument"); s != FZ_OK) {
        return s;
    }
    return guarded(ctx, [&] { fz::save_trialset(set->set, path); });
}

void fz_trialset_free(fz_trialset* set) {
    delete set;
}

size_t fz_trialset_trials(const fz_trialset* set) {
    return set ? set->set.trials.size() : 0;
}

size_t fz_trialset_channels(const fz_trialset* set) {
    return set ? set->set.channel_count : 0;
}

size_t fz_trialset_samples(const fz_trialset* set) {
    return set ? set->set.sample_count() : 0;
}

size_t fz_trialset_classes(const fz_trialset* set) {
    return set ? set->set.n_classes() : 0;
}

double fz_trialset_fs(const fz_trialset* set) {
    return set ? set->set.fs : 0.0;
}

int fz_trialset_label(const fz_trialset* set, size_t trial) {
    if (!set || trial >= set->set.trials.size()) return -1;
    return set->set.trials[trial].label;
}

fz_status fz_trialset_copy_trial(fz_context* ctx, const fz_trialset* set, size_t trial,
                                 double* out, size_t out_len) {
    if (fz_status s = require(ctx, set && out, "copy_trial: null argument"); s != FZ_OK) {
        return s;
    }
    return guarded(ctx, [&] {
        if (trial >= set->set.trials.size()) {
            throw fz::DomainError("copy_trial: trial index out of range");
        }
        const fz::Matrix& data = set->set.trials[trial].data;
        if (out_len < data.size()) {
            throw fz::DomainError("copy_trial: buffer too small");
        }
        for (std::size_t i = 0; i < data.size(); ++i) out[i] = data.data()[i];
    });
}

const char* fz_version(void) {
    return "0.1.0";
}

} // extern "C"
