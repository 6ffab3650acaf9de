/* C interface to the error-reducing-code simulation library.
 *
 * All functions return erc_status; failures leave a thread-local message
 * readable through erc_last_error().  Objects are opaque and freed with the
 * matching *_free function.  Pointers returned inside erc_result_row borrow
 * from the erc_results object and stay valid until it is freed.
 */
#ifndef ERC_H
#define ERC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ERC_API __declspec(dllexport)
#else
#define ERC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum erc_status {
  ERC_OK = 0,
  ERC_EINVAL = 1,   /* bad argument or inconsistent configuration */
  ERC_EPARSE = 2,   /* malformed config, alist, protograph, or report */
  ERC_EIO = 3,      /* file could not be read or written */
  ERC_ESTATE = 4,   /* operation not valid for this object */
  ERC_ENOMEM = 5,
  ERC_EINTERNAL = 6,
} erc_status;

typedef struct erc_config erc_config;
typedef struct erc_results erc_results;

ERC_API const char* erc_version(void);
ERC_API const char* erc_last_error(void);

/* ---- configuration ---------------------------------------------------- */

ERC_API erc_status erc_config_from_string(const char* text, erc_config** out);
ERC_API erc_status erc_config_from_file(const char* path, erc_config** out);
/* Insert or overwrite one key before running. */
ERC_API erc_status erc_config_set(erc_config* cfg, const char* key,
                                  const char* value);
/* 16 hex chars + NUL written to buf (size >= 17). */
ERC_API erc_status erc_config_hash(const erc_config* cfg, char* buf,
                                   size_t size);
ERC_API void erc_config_free(erc_config* cfg);

/* ---- simulation ------------------------------------------------------- */

/* Monte Carlo over the config's snr_grid. threads >= 1; results are
 * identical for every thread count. */
ERC_API erc_status erc_run_sweep(const erc_config* cfg, int threads,
                                 erc_results** out);
/* Single operating point at linear symbol power P. */
ERC_API erc_status erc_run_point(const erc_config* cfg, double power,
                                 int threads, erc_results** out);
/* k1_list x alpha_grid sweep at the config's split_snr
 * (superposition_2ldpc only). */
ERC_API erc_status erc_run_power_split(const erc_config* cfg, int threads,
                                       erc_results** out);

/* ---- results ---------------------------------------------------------- */

typedef struct erc_result_row {
  const char* scheme;
  double P;
  double esn0_db;
  double ebn0_db;
  long trials;
  long bit_errors;
  long bits;
  long frame_errors;
  double ber;
  double fer;
  double ber_ci_lo; /* 95% Wilson interval on BER */
  double ber_ci_hi;
  uint64_t seed;
  double k1;    /* power-split rows only, else NaN */
  double alpha; /* power-split rows only, else NaN */
} erc_result_row;

ERC_API erc_status erc_results_from_json(const char* text, erc_results** out);
ERC_API size_t erc_results_row_count(const erc_results* r);
ERC_API erc_status erc_results_row(const erc_results* r, size_t index,
                                   erc_result_row* out);
/* Serialized forms; free the returned string with erc_string_free. */
ERC_API erc_status erc_results_to_csv(const erc_results* r, char** out);
ERC_API erc_status erc_results_to_json(const erc_results* r, char** out);
ERC_API void erc_results_free(erc_results* r);
ERC_API void erc_string_free(char* s);

/* ---- threshold fitting ------------------------------------------------ */

typedef struct erc_threshold_result {
  int found;        /* curve crosses the target inside grid +- margin */
  int extrapolated; /* crossing lies outside the measured grid */
  int monotone;     /* fitted curve is decreasing across the grid */
  double p_db;      /* threshold as 10 log10(P) */
  double esn0_db;
  double ebn0_db;
  double deviance;  /* residual deviance of the fit */
} erc_threshold_result;

/* Bernoulli-likelihood polynomial fit of BER versus P in dB over the rows of
 * `r`, solved for the first downward crossing of target_ber. */
ERC_API erc_status erc_fit_threshold(const erc_results* r, double target_ber,
                                     int degree, erc_threshold_result* out);

#ifdef __cplusplus
}
#endif

#endif /* ERC_H */
