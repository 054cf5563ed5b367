#ifndef SEL_SEL_H
#define SEL_SEL_H

#include <stddef.h>
#include <stdint.h>

#if defined(SEL_BUILDING_LIBRARY)
#define SEL_API __attribute__((visibility("default")))
#else
#define SEL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every function returns a status; on failure sel_last_error() holds a
   message for the calling thread. Output arguments are untouched on failure. */
typedef enum sel_status {
    SEL_OK = 0,
    SEL_E_INVALID_ARGUMENT = 1, /* null pointer, index out of range */
    SEL_E_VALIDATION = 2,
    SEL_E_DOMAIN = 3,
    SEL_E_UNSUPPORTED = 4,
    SEL_E_TAIL_MASS = 5,
    SEL_E_SUPPORT_VIOLATION = 6,
    SEL_E_INFEASIBLE = 7,
    SEL_E_STABILITY = 8,
    SEL_E_EMPTY_SAMPLE = 9,
    SEL_E_OVERFLOW = 20,
    SEL_E_DIVERGENCE = 21,
    SEL_E_NON_CONVERGENCE = 22,
    SEL_E_NO_ROOT = 23,
    SEL_E_STEP_FLOOR = 24,
    SEL_E_BOUNDARY_LEAK = 25,
    SEL_E_MONOTONICITY = 26,
    SEL_E_ALIASING = 27,
    SEL_E_CONSTRAINT_REPAIR = 28,
    SEL_E_INTERNAL = 99
} sel_status;

/* 0 for SEL_OK, 2 for input problems, 3 for numerical failures. */
SEL_API int sel_status_exit_code(sel_status status);
SEL_API const char* sel_status_name(sel_status status);
SEL_API const char* sel_last_error(void);
SEL_API const char* sel_version(void);

/* Worker threads for Monte Carlo loops; 0 uses the hardware count. Results
   do not depend on this setting. */
SEL_API sel_status sel_set_threads(unsigned count);

/* Strings returned through char** are owned by the caller. */
SEL_API void sel_string_free(char* s);

/* ---- special functions ---- */
SEL_API sel_status sel_ln_gamma(double x, double* out);
SEL_API sel_status sel_digamma(double x, double* out);
SEL_API sel_status sel_bessel_i(double alpha, double z, double* out);
SEL_API sel_status sel_laguerre(int n, double alpha, double u, double* out);

/* ---- densities ---- */
typedef struct sel_density sel_density;

/* {"kind": ..., "params": {...}} or a bare catalog label such as "goe". */
SEL_API sel_status sel_density_from_json(const char* json, sel_density** out);
SEL_API sel_status sel_density_surmise(const char* label, sel_density** out);
SEL_API void sel_density_free(sel_density* d);
SEL_API sel_status sel_density_to_json(const sel_density* d, char** out);
SEL_API sel_status sel_density_pdf(const sel_density* d, double s, double* out);
SEL_API sel_status sel_density_cdf(const sel_density* d, double s, double* out);
SEL_API sel_status sel_density_moment(const sel_density* d, int k, double* out);
SEL_API sel_status sel_density_entropy_closed(const sel_density* d, double* out);
SEL_API sel_status sel_density_entropy_quadrature(const sel_density* d, double* out);
/* Fills out[0..count) from the random stream (seed, stream). */
SEL_API sel_status sel_density_sample(const sel_density* d, uint64_t seed, uint64_t stream, size_t count,
                                      double* out);

/* Histogram CSV (bin_left, bin_right, empirical_density, model_density,
   abs_diff) with a trailing summary row. model may be null. */
SEL_API sel_status sel_emit_histogram(const double* samples, size_t count, size_t bins, double lo, double hi,
                                      const sel_density* model, char** csv_out);

/* ---- experiments ---- */
typedef struct sel_experiment sel_experiment;

SEL_API size_t sel_command_count(void);
SEL_API const char* sel_command_name(size_t index);

/* params_json may be null for defaults; format is "csv" or "json" (null: csv). */
SEL_API sel_status sel_run_experiment(const char* command, const char* params_json, uint64_t seed,
                                      const char* format, sel_experiment** out);
SEL_API void sel_experiment_free(sel_experiment* e);

SEL_API sel_status sel_experiment_artifact_count(const sel_experiment* e, size_t* out);
/* Pointers stay valid until sel_experiment_free. */
SEL_API sel_status sel_experiment_artifact(const sel_experiment* e, size_t index, const char** name,
                                           const char** content, size_t* length);
SEL_API sel_status sel_experiment_summary(const sel_experiment* e, const char** json);
SEL_API sel_status sel_experiment_manifest(const sel_experiment* e, const char** json);
SEL_API sel_status sel_experiment_seconds(const sel_experiment* e, double* out);

/* Acceptance criteria (verify only; zero for other commands). */
SEL_API sel_status sel_experiment_criterion_count(const sel_experiment* e, size_t* out);
SEL_API sel_status sel_experiment_criterion(const sel_experiment* e, size_t index, int* id, const char** name,
                                            int* passed, const char** detail, double* seconds);
SEL_API sel_status sel_experiment_passed(const sel_experiment* e, int* out);

#ifdef __cplusplus
}
#endif

#endif
