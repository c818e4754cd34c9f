/* pcip - reconstruction of the zero-order coefficient of a 2D parabolic
 * equation from two-sided Cauchy boundary data.
 *
 * C binding of the C++ core: opaque handles, integer status codes, and a
 * thread-local textual error message. All functions returning int use
 * PCIP_OK (0) for success.
 */
#ifndef PCIP_H
#define PCIP_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define PCIP_API __declspec(dllexport)
#else
#define PCIP_API __attribute__((visibility("default")))
#endif

enum pcip_status {
  PCIP_OK = 0,
  PCIP_ERR_INVALID_CONFIG = 1,
  PCIP_ERR_MAX_ITERS = 2,      /* Picard loop hit max_iters; artifacts written */
  PCIP_ERR_STABILITY = 3,
  PCIP_ERR_GRID = 4,
  PCIP_ERR_SINGULAR = 5,
  PCIP_ERR_NONFINITE = 6,
  PCIP_ERR_MISSING_ARTIFACT = 7,
  PCIP_ERR_IO = 8,
  PCIP_ERR_INTERNAL = 99
};

typedef struct pcip_config pcip_config;
typedef struct pcip_report pcip_report;

PCIP_API const char* pcip_version(void);

/* Message for the most recent failing call on this thread; empty string if
 * the last call succeeded. */
PCIP_API const char* pcip_last_error(void);

/* ----- configuration ----- */

/* A fresh configuration holding the calibrated defaults. */
PCIP_API pcip_config* pcip_config_new(void);
PCIP_API void pcip_config_free(pcip_config* config);

/* Set / read one flat "key" (same keys as the config file format). */
PCIP_API int pcip_config_set(pcip_config* config, const char* key, const char* value);
PCIP_API int pcip_config_get(const pcip_config* config, const char* key,
                             char* buffer, size_t buffer_size);

/* Apply "key = value" lines from a file ('#' comments allowed). */
PCIP_API int pcip_config_load_file(pcip_config* config, const char* path);

/* Full precondition check; on failure the message names the constraint. */
PCIP_API int pcip_config_validate(const pcip_config* config);

/* ----- pipeline ----- */

/* Run the whole pipeline and write artifacts into the configured out_dir.
 * On PCIP_OK and PCIP_ERR_MAX_ITERS a report is produced when `report` is
 * non-NULL (caller frees). */
PCIP_API int pcip_run_pipeline(const pcip_config* config, pcip_report** report);

/* Truncation-mismatch sweep over the given cutoff grid; writes
 * cutoff_sweep.csv into out_dir. */
PCIP_API int pcip_sweep_cutoff(const pcip_config* config,
                               const int* n1_values, size_t n1_count,
                               const int* nt_values, size_t nt_count);

/* Regenerate the gnuplot scripts for an existing run directory. */
PCIP_API int pcip_emit_plots(const char* run_dir);

/* ----- report accessors ----- */

PCIP_API void pcip_report_free(pcip_report* report);
PCIP_API int pcip_report_iterations(const pcip_report* report);
PCIP_API int pcip_report_converged(const pcip_report* report);
PCIP_API double pcip_report_wall_time_seconds(const pcip_report* report);
PCIP_API double pcip_report_l2_relative_error(const pcip_report* report);
PCIP_API size_t pcip_report_inclusion_count(const pcip_report* report);
PCIP_API double pcip_report_max_in_inclusion(const pcip_report* report, size_t index);
PCIP_API double pcip_report_relative_max_error(const pcip_report* report, size_t index);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PCIP_H */
