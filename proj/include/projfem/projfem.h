/*
 * projfem C API: incompressible Navier-Stokes projection schemes on the
 * unit square, with manufactured-solution error reports.
 *
 * All objects are opaque handles created and destroyed here. Functions
 * returning int use 0 for success, PROJFEM_ERR_USAGE for invalid
 * configuration or arguments and PROJFEM_ERR_RUNTIME for solver or I/O
 * failures; projfem_last_error() describes the most recent failure on
 * the calling thread.
 */

#ifndef PROJFEM_PROJFEM_H
#define PROJFEM_PROJFEM_H

#ifdef __cplusplus
extern "C" {
#endif

#define PROJFEM_OK 0
#define PROJFEM_ERR_RUNTIME 1
#define PROJFEM_ERR_USAGE 2

typedef struct projfem_config projfem_config;
typedef struct projfem_result projfem_result;
typedef struct projfem_sweep projfem_sweep;
typedef struct projfem_compare projfem_compare;

const char* projfem_version(void);
const char* projfem_last_error(void);
/* status of the most recent failure on this thread (0 if none yet) */
int projfem_last_error_code(void);

/* ---- configuration: flat key = value, later assignments win ---- */

projfem_config* projfem_config_create(void);
void projfem_config_destroy(projfem_config* config);
int projfem_config_set(projfem_config* config, const char* key,
                       const char* value);
int projfem_config_load_file(projfem_config* config, const char* path);
/* Writes the value into buf (NUL terminated); fails if cap is too small. */
int projfem_config_get(const projfem_config* config, const char* key,
                       char* buf, int cap);

/* ---- single run ---- */

/* NULL on failure; see projfem_last_error(). Writes errors.csv,
 * invariants.csv and optional VTK snapshots when `out` is set. */
projfem_result* projfem_run(const projfem_config* config);
void projfem_result_destroy(projfem_result* result);

/* number of time steps M (the error series has M + 1 rows) */
int projfem_result_steps(const projfem_result* result);

/* summary norms: u1_linf_l2, u1_linf_h1, u2_linf_l2, u2_linf_h1,
 * p_l2_l2, p_linf_l2 */
int projfem_result_norm(const projfem_result* result, const char* name,
                        double* out);

/* per-step series columns: time, u1_l2, u1_h1, u2_l2, u2_h1, p_l2 */
int projfem_result_series_value(const projfem_result* result, int step,
                                const char* column, double* out);

/* phases: assembly, solve, total; negative on unknown phase */
double projfem_result_seconds(const projfem_result* result, const char* phase);

int projfem_result_write_csv(const projfem_result* result, const char* path);

/* ---- temporal convergence sweep ---- */

/* One run per k (descending ladder, each dividing T). ks may be NULL to
 * use the configured k_list. */
projfem_sweep* projfem_convergence(const projfem_config* config,
                                   const double* ks, int count);
void projfem_sweep_destroy(projfem_sweep* sweep);
int projfem_sweep_count(const projfem_sweep* sweep);
int projfem_sweep_value(const projfem_sweep* sweep, int k_index,
                        const char* norm, double* out);
/* observed order between ladder entries pair_index and pair_index + 1 */
int projfem_sweep_order(const projfem_sweep* sweep, int pair_index,
                        const char* norm, double* out);
int projfem_sweep_write_csv(const projfem_sweep* sweep, const char* path);
/* CSV or pretty table depending on `format`; fails if cap is too small */
int projfem_sweep_format(const projfem_sweep* sweep, char* buf, int cap);

/* ---- scheme comparison at fixed (n, k) ---- */

projfem_compare* projfem_compare_run(const projfem_config* config,
                                     const char* const* schemes, int count);
void projfem_compare_destroy(projfem_compare* compare);
int projfem_compare_count(const projfem_compare* compare);
/* metrics: the six norms plus assembly_seconds, solve_seconds,
 * total_seconds, relative_cost */
int projfem_compare_value(const projfem_compare* compare, int scheme_index,
                          const char* metric, double* out);
int projfem_compare_write_csv(const projfem_compare* compare, const char* path);
int projfem_compare_format(const projfem_compare* compare, char* buf, int cap);

#ifdef __cplusplus
}
#endif

#endif /* PROJFEM_PROJFEM_H */
