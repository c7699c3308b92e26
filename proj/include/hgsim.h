/* C API of the harmonic-generation photon-statistics simulator.
 *
 * The library runs configuration-driven experiments (exact quantum
 * evolution, classical coupled-mode dynamics, semiclassical trajectory
 * ensembles, closed-form predictions) and writes CSV/JSON artifacts.
 * Configurations are JSON strings; see the README for the schema.
 *
 * All functions return hg_status; on failure hg_last_error() holds a
 * thread-local message valid until the next failing call on that thread.
 */

#ifndef HGSIM_H
#define HGSIM_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hg_status {
  HG_OK = 0,
  HG_ERROR_CONFIG = 2,    /* invalid configuration or argument */
  HG_ERROR_NUMERICAL = 3, /* solver or iteration failure */
  HG_ERROR_IO = 4,        /* file system failure */
  HG_ERROR_MEMORY = 5,    /* problem exceeds the configured memory budget */
  HG_ERROR_INTERNAL = 6   /* unexpected failure */
} hg_status;

/* Opaque run handle: one configured task (experiment, reproduce-table or
 * scan-global-fano), executed at most once. */
typedef struct hg_run hg_run;

const char* hg_version(void);

/* Thread-local message for the most recent failure on this thread. */
const char* hg_last_error(void);

/* Creates a run from a JSON configuration. The config is validated lazily:
 * structural JSON errors fail here, semantic errors fail in hg_run_execute. */
hg_status hg_run_create(const char* config_json, hg_run** out);

/* Executes the run: writes the artifact files into the configured output
 * directory and stores the summary on the handle. */
hg_status hg_run_execute(hg_run* run);

/* Summary JSON of an executed run; owned by the handle, NULL before
 * execution. */
const char* hg_run_summary_json(const hg_run* run);

/* Deterministic data files written by an executed run (paths relative to
 * the output directory). */
size_t hg_run_output_count(const hg_run* run);
const char* hg_run_output_path(const hg_run* run, size_t index);
const char* hg_run_output_dir(const hg_run* run);

void hg_run_destroy(hg_run* run);

/* Closed-form quasi-stationary Fano factors of the no-energy-transfer
 * regime, as exact reduced rationals. */
hg_status hg_net_fano(int order, long long* f1_num, long long* f1_den, long long* fn_num,
                      long long* fn_den);

/* Mean oscillation frequency, frequency spread, and the derived periods
 * (order >= 2). Any output pointer may be NULL. */
hg_status hg_net_frequencies(int order, double r, double* omega_bar, double* delta_omega,
                             double* t_osc, double* t_rel);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* HGSIM_H */
