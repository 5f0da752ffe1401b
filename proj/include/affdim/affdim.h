/* affdim: compressibility measures of affinely singular random vectors.
 *
 * C interface to the affdim core. Handles are opaque; every call that can
 * fail returns an affdim_status and, on failure, an error message in *error
 * (free with affdim_string_free). JSON/CSV payloads returned through char**
 * out-parameters are also owned by the caller.
 *
 * Rationals cross this boundary as strings "p/q".
 */

#ifndef AFFDIM_AFFDIM_H
#define AFFDIM_AFFDIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define AFFDIM_API __declspec(dllexport)
#else
#define AFFDIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum affdim_status {
  AFFDIM_OK = 0,
  AFFDIM_ERR_INVALID_ARGUMENT = 1,
  AFFDIM_ERR_PARSE = 2,
  AFFDIM_ERR_VALIDATION = 3,
  AFFDIM_ERR_NUMERIC = 4,
  AFFDIM_ERR_INTERNAL = 5
} affdim_status;

typedef struct affdim_source affdim_source; /* a discrete-continuous source */
typedef struct affdim_matrix affdim_matrix; /* an exact rational matrix */

AFFDIM_API const char* affdim_version(void);
AFFDIM_API void affdim_string_free(char* s);

/* ---- configuration objects ------------------------------------------- */

AFFDIM_API affdim_status affdim_source_from_json(const char* json,
                                                 affdim_source** out,
                                                 char** error);
AFFDIM_API void affdim_source_free(affdim_source* source);

/* JSON array of {field, rule}; empty array means the source is valid. */
AFFDIM_API affdim_status affdim_source_validate(const affdim_source* source,
                                                char** violations_json,
                                                char** error);

/* JSON array of "p/q" marginals Pr(nu_i = 1). */
AFFDIM_API affdim_status affdim_source_marginal_alpha(const affdim_source* source,
                                                      char** json, char** error);

AFFDIM_API affdim_status affdim_matrix_from_json(const char* json,
                                                 affdim_matrix** out,
                                                 char** error);
AFFDIM_API void affdim_matrix_free(affdim_matrix* matrix);

/* ---- analyses --------------------------------------------------------- */

/* {"spark": k, "rank": r, "condition": bool}  (condition: spark = rank+1) */
AFFDIM_API affdim_status affdim_spark_info(const affdim_matrix* matrix,
                                           char** json, char** error);

/* Exact d(AX) = E_nu[rank(A^nu)].
 * {"value":"p/q","value_float":f,"method":...,"ci":null,"patterns":N} */
AFFDIM_API affdim_status affdim_rid_exact(const affdim_source* source,
                                          const affdim_matrix* matrix,
                                          char** json, char** error);

AFFDIM_API affdim_status affdim_rid_mc(const affdim_source* source,
                                       const affdim_matrix* matrix,
                                       uint64_t samples, uint64_t seed,
                                       char** json, char** error);

/* Exact E[min(|nu|_1, m)] as "p/q". */
AFFDIM_API affdim_status affdim_lipschitz_upper_bound(const affdim_source* source,
                                                      int m, char** json,
                                                      char** error);

/* Affinely singular decomposition; audit != 0 adds per-component members. */
AFFDIM_API affdim_status affdim_decompose(const affdim_source* source,
                                          const affdim_matrix* matrix, int audit,
                                          char** json, char** error);

/* Dimensional rate bias. Optional rate-distortion oracle curve: pass
 * n_distortions > 0 decreasing distortions (1-D Gaussian+atoms sources only);
 * grid_step_hint <= 0 selects the default sqrt(D)/4 grid. */
AFFDIM_API affdim_status affdim_drb(const affdim_source* source,
                                    const affdim_matrix* matrix,
                                    const double* oracle_distortions,
                                    size_t n_distortions, double grid_step_hint,
                                    char** json, char** error);

/* Empirical RID from quantized-sample entropies. `matrix` may be NULL (Y = X).
 * Returns both a CSV table (scale, entropy_bits) and a JSON summary. */
AFFDIM_API affdim_status affdim_empirical_rid(const affdim_source* source,
                                              const affdim_matrix* matrix,
                                              const uint64_t* scales,
                                              size_t n_scales, uint64_t samples,
                                              uint64_t seed, char** csv,
                                              char** json, char** error);

/* ---- moving-average processes ----------------------------------------- */

/* taps_csv: comma-separated rationals/decimals, e.g. "-2,0.5,1".
 * alpha: "p/q". mc_samples = 0 selects exact mode (m + l1 + l2 <= 20).
 * Returns the BID curve as CSV (m, d, d_over_m, lower, upper) and JSON. */
AFFDIM_API affdim_status affdim_ma_report(const char* taps_csv, const char* alpha,
                                          int m_lo, int m_hi, uint64_t mc_samples,
                                          uint64_t seed, char** csv, char** json,
                                          char** error);

/* Concentration bounds for a length-n excitation window at dimension k,
 * plus the sample-size thresholds for (eps, delta); pass eps = delta = 0 to
 * skip the thresholds. Only the band width l1 + l2 = (#taps - 1) enters the
 * formulas. */
AFFDIM_API affdim_status affdim_ma_bounds(const char* taps_csv, const char* alpha,
                                          int n, int k, double eps, double delta,
                                          char** json, char** error);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* AFFDIM_AFFDIM_H */
