#ifndef VARLEX_VARLEX_H
#define VARLEX_VARLEX_H

/*
 * C interface to libvarlex.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_destroy function. Every fallible call returns a varlex_status;
 * on failure varlex_last_error() describes the problem (per thread, valid
 * until the next failing call on that thread). Strings returned through
 * char** out-parameters are heap-allocated and released with
 * varlex_string_free.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define VARLEX_API __declspec(dllexport)
#else
#  define VARLEX_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum varlex_status {
  VARLEX_OK = 0,
  VARLEX_ERROR_NULL_ARGUMENT = 1,
  VARLEX_ERROR_DOMAIN = 2,
  VARLEX_ERROR_VALIDATION = 3,
  VARLEX_ERROR_PARSE = 4,
  VARLEX_ERROR_NOT_WITNESSED = 5,
  VARLEX_ERROR_GRID_TOO_SHALLOW = 6,
  VARLEX_ERROR_INVARIANT = 7,
  VARLEX_ERROR_BUDGET = 8,
  VARLEX_ERROR_CAPACITY = 9,
  VARLEX_ERROR_INTERNAL = 10
} varlex_status;

typedef struct varlex_stepfn varlex_stepfn;
typedef struct varlex_transport varlex_transport;
typedef struct varlex_trace varlex_trace;
typedef struct varlex_scan_report varlex_scan_report;

typedef struct varlex_norm_result {
  double value;
  double lo;
  double hi;
  double modular;
  int iterations;
} varlex_norm_result;

typedef enum varlex_verdict {
  VARLEX_VERDICT_DIVERGENT = 0,
  VARLEX_VERDICT_CONVERGENT = 1,
  VARLEX_VERDICT_INCONCLUSIVE = 2
} varlex_verdict;

VARLEX_API const char* varlex_last_error(void);
VARLEX_API const char* varlex_status_string(varlex_status status);
VARLEX_API void varlex_string_free(char* s);

/* ---- step functions ---------------------------------------------------- */

VARLEX_API varlex_status varlex_stepfn_create(const double* breakpoints, size_t n_breakpoints,
                                              const double* values, size_t n_values,
                                              varlex_stepfn** out);
VARLEX_API varlex_status varlex_stepfn_from_json(const char* json, varlex_stepfn** out);
VARLEX_API varlex_status varlex_stepfn_to_json(const varlex_stepfn* f, char** out);
VARLEX_API void varlex_stepfn_destroy(varlex_stepfn* f);

VARLEX_API size_t varlex_stepfn_cells(const varlex_stepfn* f);
/* Copy breakpoints (cells + 1 entries) or values (cells entries). */
VARLEX_API varlex_status varlex_stepfn_breakpoints(const varlex_stepfn* f, double* out,
                                                   size_t capacity);
VARLEX_API varlex_status varlex_stepfn_values(const varlex_stepfn* f, double* out,
                                              size_t capacity);
VARLEX_API varlex_status varlex_stepfn_evaluate(const varlex_stepfn* f, double t, double* out);
VARLEX_API varlex_status varlex_stepfn_integrate(const varlex_stepfn* f, double* out);
VARLEX_API varlex_status varlex_indicator(double a, double b, varlex_stepfn** out);

/* Built-in profiles: "log", "sqrtlog", "const:<p0>" on the dyadic octave
 * grid of the given depth with octave_cells cells per octave. */
VARLEX_API varlex_status varlex_generate(const char* spec, int depth, int octave_cells,
                                         varlex_stepfn** out);

/* ---- rearrangement ----------------------------------------------------- */

VARLEX_API varlex_status varlex_distribution_function(const varlex_stepfn* f, double level,
                                                      double* out);
VARLEX_API varlex_status varlex_rearrange(const varlex_stepfn* f, varlex_stepfn** out);
VARLEX_API varlex_status varlex_equimeasurable(const varlex_stepfn* f, const varlex_stepfn* g,
                                               double tolerance, int* out);
VARLEX_API varlex_status varlex_sorting_transport(const varlex_stepfn* f,
                                                  varlex_transport** out);
VARLEX_API varlex_status varlex_transport_from_json(const char* json, varlex_transport** out);
VARLEX_API varlex_status varlex_transport_to_json(const varlex_transport* omega, char** out);
VARLEX_API varlex_status varlex_transport_apply(const varlex_transport* omega, double t,
                                                double* out);
VARLEX_API void varlex_transport_destroy(varlex_transport* omega);
VARLEX_API varlex_status varlex_pull_back(const varlex_stepfn* p_star,
                                          const varlex_transport* omega, varlex_stepfn** out);

/* ---- norms ------------------------------------------------------------- */

/* Exponent arguments must have every value >= 1. */
VARLEX_API varlex_status varlex_modular(const varlex_stepfn* f, const varlex_stepfn* p,
                                        double lambda, double* out);
VARLEX_API varlex_status varlex_luxemburg_norm(const varlex_stepfn* f, const varlex_stepfn* p,
                                               double tol, varlex_norm_result* out);
VARLEX_API varlex_status varlex_orlicz_exp_norm(const varlex_stepfn* f, double tol,
                                                varlex_norm_result* out);
VARLEX_API varlex_status varlex_marcinkiewicz_ln_norm(const varlex_stepfn* f, double* out);
VARLEX_API varlex_status varlex_sup_log_ratio_norm(const varlex_stepfn* f, double* out);
VARLEX_API varlex_status varlex_norm_result_to_json(const varlex_norm_result* r, char** out);

/* ---- diagnostics ------------------------------------------------------- */

/* ratios and tail receive max_depth + 1 entries (depths 0..max_depth). */
VARLEX_API varlex_status varlex_ratio_profile(const varlex_stepfn* p_star, int max_depth,
                                              double* ratios, double* tail, size_t capacity);
VARLEX_API varlex_status varlex_exp_integral(const varlex_stepfn* p_star, double c,
                                             const int* depths, size_t n_depths,
                                             double* partials, varlex_verdict* verdict);
VARLEX_API varlex_status varlex_mln_defect(const varlex_stepfn* f, const int* depths,
                                           size_t n_depths, double* out);
/* The profile is rearranged first. extra_bases may be NULL. */
VARLEX_API varlex_status varlex_diagnose_json(const varlex_stepfn* profile, int depth,
                                              double delta, const double* extra_bases,
                                              size_t n_extra, char** out);

/* ---- construction ------------------------------------------------------ */

typedef struct varlex_construct_config {
  int grid_depth;   /* default 40 */
  int octave_cells; /* default 16 */
  double d;         /* <= 0: half the deepest tail ratio of h */
  double c;         /* <= 0: e^{2/d} */
  int max_anchors;  /* default 64 */
  int max_stages;   /* default 64 */
  int dimension;    /* default 2 */
  int bits;         /* 0: floor(52 / dimension) */
  int sample_points;/* default 10000 */
  uint64_t seed;
  int keep_stages;  /* nonzero: retain p_1..p_K in the trace */
} varlex_construct_config;

VARLEX_API void varlex_construct_config_default(varlex_construct_config* cfg);

/* The profile is rearranged first. Audit failures do not fail the call;
 * check varlex_trace_passed. */
VARLEX_API varlex_status varlex_construct(const varlex_stepfn* profile,
                                          const varlex_construct_config* cfg,
                                          varlex_trace** out);
VARLEX_API varlex_status varlex_trace_from_json(const char* json, varlex_trace** out);
VARLEX_API varlex_status varlex_trace_to_json(const varlex_trace* t, char** out);
VARLEX_API void varlex_trace_destroy(varlex_trace* t);

VARLEX_API int varlex_trace_passed(const varlex_trace* t);
VARLEX_API double varlex_trace_d(const varlex_trace* t);
VARLEX_API double varlex_trace_c(const varlex_trace* t);
VARLEX_API int varlex_trace_dimension(const varlex_trace* t);
VARLEX_API int varlex_trace_stage_count(const varlex_trace* t);
VARLEX_API int varlex_trace_coverage_level(const varlex_trace* t);
VARLEX_API size_t varlex_trace_audit_count(const varlex_trace* t);
/* name and detail stay valid while the trace lives. */
VARLEX_API varlex_status varlex_trace_audit_item(const varlex_trace* t, size_t i,
                                                 const char** name, int* passed,
                                                 const char** detail);
VARLEX_API varlex_status varlex_trace_p_hat(const varlex_trace* t, varlex_stepfn** out);
VARLEX_API varlex_status varlex_trace_q(const varlex_trace* t, varlex_stepfn** out);

/* ---- interleaving ------------------------------------------------------ */

VARLEX_API varlex_status varlex_interleave_point(const double* x, int n, int bits,
                                                 double* out);
VARLEX_API varlex_status varlex_cube_image(int n, int level, const uint64_t* indices,
                                           int* image_level, uint64_t* image_index);
/* bits = 0 selects floor(52 / n). */
VARLEX_API varlex_status varlex_rect_norm(const varlex_stepfn* p_hat, int n, int bits,
                                          const int* levels, const uint64_t* indices,
                                          double tol, varlex_norm_result* out);
VARLEX_API varlex_status varlex_rect_norm_json(const varlex_stepfn* p_hat, int n, int bits,
                                               const char* rect_json, double tol,
                                               varlex_norm_result* out);

/* ---- closedness scan --------------------------------------------------- */

VARLEX_API varlex_status varlex_scan(const varlex_stepfn* p_hat, int n, int bits,
                                     int max_level, double tol, int coverage_level,
                                     varlex_scan_report** out);
VARLEX_API varlex_status varlex_scan_trace(const varlex_trace* t, int max_level, double tol,
                                           varlex_scan_report** out);
VARLEX_API void varlex_scan_report_destroy(varlex_scan_report* r);
VARLEX_API size_t varlex_scan_level_count(const varlex_scan_report* r);
VARLEX_API int varlex_scan_clamped(const varlex_scan_report* r);
VARLEX_API varlex_status varlex_scan_level(const varlex_scan_report* r, size_t i, int* level,
                                           double* min_norm, uint64_t* argmin_image,
                                           int* within_coverage);
VARLEX_API varlex_status varlex_scan_to_json(const varlex_scan_report* r, char** out);
VARLEX_API varlex_status varlex_scan_to_csv(const varlex_scan_report* r, char** out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* VARLEX_VARLEX_H */
