#ifndef MANINLAB_H
#define MANINLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(MANINLAB_BUILDING)
#define ML_API __attribute__((visibility("default")))
#else
#define ML_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes; the nonzero values mirror maninlab::ErrorCode. */
typedef enum ml_status {
  ML_OK = 0,
  ML_ERR_PARSE = 1,
  ML_ERR_NON_HOMOGENEOUS = 2,
  ML_ERR_DEGREE_TOO_SMALL = 3,
  ML_ERR_TOO_FEW_VARIABLES = 4,
  ML_ERR_ZERO_POLYNOMIAL = 5,
  ML_ERR_DIMENSION_MISMATCH = 6,
  ML_ERR_BAD_PRIME = 7,
  ML_ERR_BUDGET_EXCEEDED = 8,
  ML_ERR_POLE = 9,
  ML_ERR_INSUFFICIENT_DATA = 10,
  ML_ERR_BOUND_TOO_LARGE = 11,
  ML_ERR_INVALID_ARGUMENT = 12,
  ML_ERR_IO = 13,
  ML_ERR_OVERFLOW = 14,
  ML_ERR_PRECISION_NOT_REACHED = 15,
  ML_ERR_INTERNAL = 99
} ml_status;

/* An experiment: configuration plus the hypersurface it defines. */
typedef struct ml_experiment ml_experiment;

ML_API const char* ml_version(void);
/* Message of the last failed call on this thread ("" if none). */
ML_API const char* ml_last_error(void);
ML_API const char* ml_status_name(ml_status status);
/* Frees strings returned through char** out-parameters. */
ML_API void ml_string_free(char* s);

ML_API ml_status ml_experiment_load(const char* path, ml_experiment** out);
ML_API ml_status ml_experiment_parse(const char* yaml, ml_experiment** out);
ML_API ml_status ml_experiment_from_polynomial(const char* polynomial, ml_experiment** out);
ML_API void ml_experiment_free(ml_experiment* exp);
/* Overrides one config key with a YAML scalar, e.g. ("s0", "4.5"). */
ML_API ml_status ml_experiment_set(ml_experiment* exp, const char* key, const char* value);
ML_API ml_status ml_experiment_serialize(const ml_experiment* exp, char** yaml_out);
/* Number of variables n. */
ML_API int ml_experiment_dimension(const ml_experiment* exp);
/* Bad primes in ascending order; returns how many exist (writes at most cap). */
ML_API size_t ml_experiment_bad_primes(ml_experiment* exp, uint64_t* out, size_t cap);

/* H(s; a/b) with s from the config. */
ML_API ml_status ml_height(ml_experiment* exp, const int64_t* a, size_t n, int64_t b, double* out);
/* N(B) = #{x : H(s; x) <= B}. */
ML_API ml_status ml_count(ml_experiment* exp, double B, uint64_t* out);

/* Artifacts. Text is returned in the config's format where both exist;
   results are served from the artifact cache when it is enabled.
   `cache_hit` may be NULL. A NaN bound means the B of the config. */
ML_API ml_status ml_count_report(ml_experiment* exp, double B, char** out, int* cache_hit);
ML_API ml_status ml_scan(ml_experiment* exp, char** csv_out, int* cache_hit);
ML_API ml_status ml_points(ml_experiment* exp, double B, char** csv_out);
ML_API ml_status ml_fit(const char* counts_csv, char** json_out);
ML_API ml_status ml_theta(ml_experiment* exp, char** json_out, int* cache_hit);
/* suite: volumes | fourier-trivial | fourier-char | hensel | bounds | all.
   *passed is 1 iff every gating check passed. */
ML_API ml_status ml_verify(ml_experiment* exp, const char* suite, int* passed, char** json_out, int* cache_hit);
ML_API ml_status ml_ff_count(ml_experiment* exp, char** out);

/* Local factors at s from the config (complex parts zero). */
ML_API ml_status ml_local_density(ml_experiment* exp, uint64_t p, double* value, double* error);
ML_API ml_status ml_fourier_trivial(ml_experiment* exp, uint64_t p, int closed, double* re, double* im,
                                    double* error_bound);

#ifdef __cplusplus
}
#endif

#endif
