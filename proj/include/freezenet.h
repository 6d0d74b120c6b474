/* freezenet: deterministic CPU training library for weight-freezing
 * experiments, exposed as a C shared-library API with opaque handles and
 * status codes. All functions are safe to call from any single thread per
 * context; contexts are independent. */

#ifndef FREEZENET_H
#define FREEZENET_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fz_status {
    FZ_OK = 0,
    FZ_ERR_CONFIG = 1,  /* bad config file, invalid values, unknown keys */
    FZ_ERR_DATA = 2,    /* file format, I/O or shape problems */
    FZ_ERR_NUMERIC = 3, /* non-finite values during training */
    FZ_ERR_INTERNAL = 4
} fz_status;

/* Holds the last error message of operations invoked through it. */
typedef struct fz_context fz_context;

fz_context* fz_context_new(void);
void fz_context_free(fz_context* ctx);

/* Message of the most recent failure on this context; empty string if the
 * last call succeeded. The pointer stays valid until the next call. */
const char* fz_last_error(const fz_context* ctx);

typedef struct fz_run_options {
    uint64_t seed; /* applied when has_seed is nonzero; overrides the config */
    int has_seed;
    int threads;   /* <= 0 consults FREEZENET_THREADS, else defaults to 1 */
    int quiet;
} fz_run_options;

/* Experiment verbs. config_path names a JSON experiment config; artifacts
 * are written under out_dir. opts may be NULL for defaults. */
fz_status fz_generate(fz_context* ctx, const char* config_path, const char* out_dir,
                      const fz_run_options* opts);
fz_status fz_preprocess(fz_context* ctx, const char* config_path, const char* out_dir,
                        const fz_run_options* opts);
fz_status fz_train(fz_context* ctx, const char* config_path, const char* out_dir,
                   const fz_run_options* opts);
fz_status fz_sweep(fz_context* ctx, const char* config_path, const char* out_dir,
                   const fz_run_options* opts);
fz_status fz_compare(fz_context* ctx, const char* config_path, const char* out_dir,
                     const fz_run_options* opts);

/* Rebuilds the SVG charts inside an existing run directory. */
fz_status fz_report(fz_context* ctx, const char* run_dir, const fz_run_options* opts);

/* Opaque handle over the .frz trial container. */
typedef struct fz_trialset fz_trialset;

fz_status fz_trialset_load(fz_context* ctx, const char* path, fz_trialset** out);
fz_status fz_trialset_save(fz_context* ctx, const fz_trialset* set, const char* path);
void fz_trialset_free(fz_trialset* set);

size_t fz_trialset_trials(const fz_trialset* set);
size_t fz_trialset_channels(const fz_trialset* set);
size_t fz_trialset_samples(const fz_trialset* set);
size_t fz_trialset_classes(const fz_trialset* set);
double fz_trialset_fs(const fz_trialset* set);
int fz_trialset_label(const fz_trialset* set, size_t trial); /* -1 if out of range */

/* Copies one trial, row-major channels x samples; out must hold
 * channels*samples doubles. */
fz_status fz_trialset_copy_trial(fz_context* ctx, const fz_trialset* set, size_t trial,
                                 double* out, size_t out_len);

const char* fz_version(void);

#ifdef __cplusplus
}
#endif

#endif /* FREEZENET_H */
