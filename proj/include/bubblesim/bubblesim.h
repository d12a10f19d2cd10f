/*
 * bubblesim C API.
 *
 * Every function returns a bsim_status; on failure a message describing the
 * last error on the calling thread is available from bsim_last_error().
 * Objects are opaque and owned by the caller once returned; release them
 * with the matching *_free function (passing NULL is allowed).
 */
#ifndef BUBBLESIM_H
#define BUBBLESIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(BSIM_BUILDING_LIBRARY)
#    define BSIM_API __declspec(dllexport)
#  else
#    define BSIM_API __declspec(dllimport)
#  endif
#else
#  define BSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bsim_status {
  BSIM_OK = 0,
  BSIM_ERR_INVALID_ARGUMENT = 1, /* NULL handle, bad index, buffer too small */
  BSIM_ERR_CONFIG = 2,           /* malformed or invalid scenario settings */
  BSIM_ERR_UNKNOWN_PRESET = 3,
  BSIM_ERR_IO = 4,
  BSIM_ERR_INTERNAL = 5
} bsim_status;

typedef struct bsim_config bsim_config;
typedef struct bsim_result bsim_result;

/* Window and threshold settings for run statistics and summaries. */
typedef struct bsim_metrics_options {
  int64_t deviation_from; /* first round of the deviation window */
  int64_t deviation_to;   /* last round, negative = end of series */
  int64_t osc_window;     /* trailing rounds for the oscillation std */
  double crash_drawdown;  /* drawdown from peak counted as a crash */
  double bubble_ratio;    /* peak / F counted as a bubble */
  double convergence_tol;
  int64_t convergence_sustain;
} bsim_metrics_options;

typedef struct bsim_series_stats {
  double mean_abs_rel_dev;
  int64_t peak_round;
  double peak_price;
  double max_drawdown;
  double osc_std;
  int64_t convergence_time; /* -1 when absent or no shock scheduled */
  int bubble;
  int crash;
} bsim_series_stats;

BSIM_API const char* bsim_version(void);
BSIM_API const char* bsim_last_error(void);
BSIM_API const char* bsim_status_string(bsim_status status);

/* Presets */
BSIM_API size_t bsim_preset_count(void);
BSIM_API const char* bsim_preset_name(size_t index); /* NULL when out of range */

/* Scenario configuration */
BSIM_API bsim_status bsim_config_new(bsim_config** out);
BSIM_API bsim_status bsim_config_from_preset(const char* name, bsim_config** out);
BSIM_API bsim_status bsim_config_parse(const char* text, bsim_config** out);
BSIM_API bsim_status bsim_config_load(const char* path, bsim_config** out);
BSIM_API bsim_status bsim_config_clone(const bsim_config* config, bsim_config** out);
BSIM_API void bsim_config_free(bsim_config* config);
/* Applies one `key = value` setting using the scenario file grammar, then revalidates. */
BSIM_API bsim_status bsim_config_set(bsim_config* config, const char* key, const char* value);
BSIM_API bsim_status bsim_config_get_seed(const bsim_config* config, uint64_t* seed);
BSIM_API bsim_status bsim_config_get_rounds(const bsim_config* config, int64_t* rounds);
/*
 * Writes the scenario file text into `buffer` (NUL-terminated). `*needed`
 * receives the required size including the terminator; pass a NULL buffer
 * to query it.
 */
BSIM_API bsim_status bsim_config_serialize(const bsim_config* config, char* buffer, size_t capacity, size_t* needed);

/* Running */
BSIM_API bsim_status bsim_run(const bsim_config* config, uint64_t seed, bsim_result** out);
/* Fills out[0..count) in seed order; on failure nothing is allocated. */
BSIM_API bsim_status bsim_run_batch(const bsim_config* config, const uint64_t* seeds, size_t count, bsim_result** out);
BSIM_API void bsim_result_free(bsim_result* result);

/* Inspecting results */
BSIM_API uint64_t bsim_result_seed(const bsim_result* result);
BSIM_API size_t bsim_result_price_count(const bsim_result* result); /* rounds + 1 */
BSIM_API bsim_status bsim_result_prices(const bsim_result* result, double* out, size_t capacity);
BSIM_API size_t bsim_result_trade_count(const bsim_result* result);
BSIM_API size_t bsim_result_agent_count(const bsim_result* result);
BSIM_API bsim_status bsim_result_agent(const bsim_result* result, size_t index, double* cash, int64_t* shares);
BSIM_API bsim_status bsim_result_write_series_csv(const bsim_result* result, const char* path);
BSIM_API bsim_status bsim_result_write_ledger_csv(const bsim_result* result, const char* path);

/* Metrics and summaries */
BSIM_API void bsim_metrics_options_default(bsim_metrics_options* options);
BSIM_API bsim_status bsim_result_stats(const bsim_result* result, const bsim_metrics_options* options,
                                       bsim_series_stats* out);
/*
 * Writes the JSON summary of `count` results. `groups` may be NULL; otherwise
 * groups[i] labels result i for aggregation (e.g. "alpha=1.05").
 * `options` may be NULL for defaults.
 */
BSIM_API bsim_status bsim_write_summary(const bsim_result* const* results, const char* const* groups, size_t count,
                                        const bsim_metrics_options* options, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* BUBBLESIM_H */
