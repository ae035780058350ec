/* ksipm — pseudo-spectral Keller-Segel / porous-media flow simulator.
 *
 * C API over the simulation core: opaque handles, integer status codes,
 * thread-local error strings.  All functions returning ksipm_status set the
 * last-error string on failure; pointers return NULL on failure.
 */

#ifndef KSIPM_H
#define KSIPM_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define KSIPM_API __declspec(dllexport)
#else
#define KSIPM_API __attribute__((visibility("default")))
#endif

typedef enum ksipm_status {
    KSIPM_OK = 0,
    KSIPM_ERR_ARG = 1,     /* bad arguments / configuration */
    KSIPM_ERR_RUNTIME = 2, /* run failed or was flagged */
    KSIPM_ERR_IO = 3       /* file I/O or format error */
} ksipm_status;

typedef enum ksipm_run_flag {
    KSIPM_RUN_OK = 0,
    KSIPM_RUN_BLOWUP_LINF = 1,
    KSIPM_RUN_BLOWUP_L2 = 2,
    KSIPM_RUN_DT_FLOOR = 3,
    KSIPM_RUN_NONFINITE = 4
} ksipm_run_flag;

typedef struct ksipm_config ksipm_config;
typedef struct ksipm_sim ksipm_sim;

typedef struct ksipm_diag_record {
    double t, dt, mass, l2sq, l2sq_bar, l2sq_tilde, linf, min_rho, grad_l2sq;
    double potential_e, term_main, term_diff, term_ks, lambda_flux;
    double nash_ratio;    /* valid only when nash_ratio_valid != 0 */
    int nash_ratio_valid;
} ksipm_diag_record;

typedef struct ksipm_run_summary {
    ksipm_run_flag flag;
    double t_final;
    double max_l2sq;
    double final_l2sq;
    double final_linf;
    double min_rho_over_max;
    long steps;
} ksipm_run_summary;

KSIPM_API const char* ksipm_version(void);
KSIPM_API const char* ksipm_last_error(void); /* thread-local, never NULL */

/* ----------------------------------------------------------- configuration */
KSIPM_API ksipm_config* ksipm_config_create(void); /* built-in defaults */
KSIPM_API ksipm_config* ksipm_config_load(const char* path);
KSIPM_API ksipm_status ksipm_config_set(ksipm_config* cfg, const char* key, const char* value);
KSIPM_API ksipm_status ksipm_config_get(const ksipm_config* cfg, const char* key, char* buf,
                                        size_t bufsz);
/* Canonical echo; returns required length (excluding NUL) even if truncated. */
KSIPM_API long ksipm_config_dump(const ksipm_config* cfg, char* buf, size_t bufsz);
KSIPM_API void ksipm_config_destroy(ksipm_config* cfg);

/* -------------------------------------------------------------- simulation */
KSIPM_API ksipm_sim* ksipm_sim_create(const ksipm_config* cfg);
KSIPM_API ksipm_sim* ksipm_sim_open_snapshot(const char* path, const ksipm_config* cfg);
KSIPM_API void ksipm_sim_destroy(ksipm_sim* sim);

KSIPM_API double ksipm_sim_time(const ksipm_sim* sim);
KSIPM_API int ksipm_sim_grid_n1(const ksipm_sim* sim);
KSIPM_API int ksipm_sim_grid_n2(const ksipm_sim* sim);
KSIPM_API double ksipm_sim_rho_mean(const ksipm_sim* sim);

/* One adaptive step (not past time.t_end). flag/dt_used may be NULL. */
KSIPM_API ksipm_status ksipm_sim_step(ksipm_sim* sim, ksipm_run_flag* flag, double* dt_used);
/* Advance to min(t_until, time.t_end) or until a non-ok flag. */
KSIPM_API ksipm_status ksipm_sim_advance(ksipm_sim* sim, double t_until, ksipm_run_flag* flag);
KSIPM_API ksipm_status ksipm_sim_diagnostics(const ksipm_sim* sim, ksipm_diag_record* out);
/* Nodal density, x2-major rows; len must be n1*n2. */
KSIPM_API ksipm_status ksipm_sim_density(const ksipm_sim* sim, double* out, size_t len);
KSIPM_API ksipm_status ksipm_sim_write_snapshot(const ksipm_sim* sim, const char* path);

/* ---------------------------------------------------- whole-run entry points */
KSIPM_API ksipm_status ksipm_run_to_dir(const ksipm_config* cfg, const char* out_dir,
                                        ksipm_run_summary* summary);
KSIPM_API ksipm_status ksipm_run_from_snapshot(const ksipm_config* cfg, const char* snapshot,
                                               const char* out_dir, ksipm_run_summary* summary);
KSIPM_API ksipm_status ksipm_sweep(const ksipm_config* cfg, const char* out_dir,
                                   const double* g_values, int n_g, int jobs);
KSIPM_API ksipm_status ksipm_classify_csv(const ksipm_config* cfg, const char* diag_csv,
                                          const char* out_dir);
KSIPM_API ksipm_status ksipm_nash_ensemble(const ksipm_config* cfg, const char* out_dir);
/* Config echo plus derived quantities; same length contract as config_dump. */
KSIPM_API long ksipm_info(const ksipm_config* cfg, char* buf, size_t bufsz);

#ifdef __cplusplus
}
#endif

#endif /* KSIPM_H */
