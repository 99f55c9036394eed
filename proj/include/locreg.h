/* C API of the local-time regularization library.
 *
 * Opaque handles + integer error codes. Every function returning int yields
 * LR_OK (0) on success; on failure it returns a category code and leaves a
 * message retrievable through lr_last_error() (thread local). Handles and
 * strings returned through out-parameters are owned by the caller and must be
 * released with the matching lr_*_free function.
 */
#ifndef LOCREG_H
#define LOCREG_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined _WIN32
#define LR_API __declspec(dllexport)
#else
#define LR_API __attribute__((visibility("default")))
#endif

enum lr_status {
  LR_OK = 0,
  LR_ERR = 1,        /* unexpected failure */
  LR_ERR_CONFIG = 2, /* invalid configuration or arguments */
  LR_ERR_ALIGN = 3,  /* eps not aligned to the grid */
  LR_ERR_IO = 4,     /* file system failure */
  LR_ERR_GATE = 5,   /* a requested pass gate did not hold */
  LR_ERR_NUMERIC = 6 /* simulation left the finite range */
};

typedef struct lr_path lr_path;
typedef struct lr_curve lr_curve;

/* drift / diffusion coefficient b(t, x) with an opaque context pointer */
typedef double (*lr_coeff_fn)(double t, double x, void* ctx);
/* scalar function f(x) with an opaque context pointer */
typedef double (*lr_fn)(double x, void* ctx);

LR_API const char* lr_version(void);
LR_API const char* lr_last_error(void);
LR_API void lr_string_free(char* s);

/* ---- paths ---- */

LR_API int lr_path_brownian(double horizon, int64_t num_steps, double origin,
                            uint64_t master_seed, uint64_t stream_index, lr_path** out);
LR_API int lr_path_diffusion(double horizon, int64_t num_steps, double origin, lr_coeff_fn drift,
                             void* drift_ctx, lr_coeff_fn sigma, void* sigma_ctx,
                             uint64_t master_seed, uint64_t stream_index, lr_path** out);
LR_API int lr_path_from_values(double horizon, int64_t num_steps, const double* values,
                               lr_path** out);
LR_API int lr_path_reverse(const lr_path* p, lr_path** out);
LR_API int lr_path_shift_level(const lr_path* p, double level, lr_path** out);
LR_API int lr_path_subsample(const lr_path* p, int64_t stride, lr_path** out);
LR_API int64_t lr_path_num_steps(const lr_path* p);
LR_API double lr_path_horizon(const lr_path* p);
/* borrowed pointer to num_steps + 1 doubles, valid while the path lives */
LR_API const double* lr_path_values(const lr_path* p);
LR_API int lr_path_save_csv(const lr_path* p, const char* file);
LR_API int lr_path_load_csv(const char* file, lr_path** out);
LR_API void lr_path_free(lr_path* p);

/* ---- curves ---- */

LR_API int64_t lr_curve_size(const lr_curve* c); /* number of grid points */
LR_API const double* lr_curve_values(const lr_curve* c);
LR_API int lr_curve_save_csv(const lr_curve* c, const char* file);
LR_API void lr_curve_free(lr_curve* c);

/* ---- estimators ----
 * scheme_tag: J, I1, I2, I3, I4, I31, I32, I41, I42, R_EPS, R3, R4, QV.
 * lag_steps: eps as a number of grid steps (eps = lag * horizon / num_steps).
 */
LR_API int lr_estimate(const lr_path* p, const char* scheme_tag, double level, int64_t lag_steps,
                       lr_curve** out);
LR_API int lr_covariation(const lr_path* p, const lr_path* q, int64_t lag_steps, lr_curve** out);
LR_API int lr_weak_pairing(const lr_path* p, lr_fn f, void* f_ctx, lr_fn antiderivative,
                           void* antiderivative_ctx, int64_t lag_steps, lr_curve** lhs,
                           lr_curve** rhs);
/* weak pairing against the built-in piecewise-linear hat on [-1, 1] */
LR_API int lr_weak_pairing_hat(const lr_path* p, int64_t lag_steps, lr_curve** lhs,
                               lr_curve** rhs);
/* markdown table mapping each scheme tag to its formula; static storage */
LR_API const char* lr_scheme_catalog(void);

/* ---- oracles ----
 * oracle_tag: TANAKA, OCCUPATION, DOWNCROSS. width is ignored for TANAKA.
 */
LR_API int lr_oracle(const lr_path* p, const char* oracle_tag, double level, double width,
                     lr_curve** out);
/* multiply a DOWNCROSS curve by this to estimate the local time */
LR_API double lr_downcrossing_factor(void);

/* ---- harness ----
 * config_json: the declarative experiment config (see README for the schema).
 * overrides: optional "key=value" strings applied on top of the config.
 * The report JSON is returned through *report_json (free with lr_string_free).
 */
LR_API int lr_run_experiment(const char* config_json, const char* const* overrides,
                             int num_overrides, char** report_json);
LR_API int lr_run_as_convergence(const char* config_json, const char* const* overrides,
                                 int num_overrides, char** report_json);
LR_API int lr_run_reversal(const char* config_json, const char* const* overrides,
                           int num_overrides, char** report_json);
LR_API int lr_fit_rate(const double* eps, const double* errors, int64_t count, double* slope,
                       double* intercept, double* r_squared);

/* ---- command layer used by the CLI ----
 * flags: bitwise-or of LR_FLAG_* values. Commands that run a requested gate
 * (enforce / check-identities / selftest) return LR_ERR_GATE when it fails.
 * *summary (optional) receives a human-readable note; free with
 * lr_string_free.
 */
enum lr_flags {
  LR_FLAG_ENFORCE = 1,
  LR_FLAG_NO_TIMINGS = 2,
  LR_FLAG_CHECK_IDENTITIES = 4,
  LR_FLAG_SELFTEST = 8
};

LR_API int lr_cmd_simulate(const char* config_json, const char* const* overrides,
                           int num_overrides, const char* out_dir, char** summary);
LR_API int lr_cmd_estimate(const char* config_json, const char* const* overrides,
                           int num_overrides, const char* out_dir, unsigned flags,
                           char** summary);
LR_API int lr_cmd_converge(const char* config_json, const char* const* overrides,
                           int num_overrides, const char* out_dir, unsigned flags,
                           char** summary);
LR_API int lr_cmd_as_converge(const char* config_json, const char* const* overrides,
                              int num_overrides, const char* out_dir, unsigned flags,
                              char** summary);
LR_API int lr_cmd_report(const char* const* report_files, int num_files, char** markdown);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* LOCREG_H */
