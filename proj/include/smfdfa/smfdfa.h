/* C interface to the sign-asymmetric MFDFA library.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns an smfdfa_status;
 * on failure smfdfa_last_error() holds a one-line description for the
 * calling thread. Handles are immutable once built and may be shared
 * between threads, except smfdfa_config, which must not be modified while
 * another thread reads it.
 */
#ifndef SMFDFA_H
#define SMFDFA_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SMFDFA_BUILDING)
#    define SMFDFA_API __declspec(dllexport)
#  else
#    define SMFDFA_API __declspec(dllimport)
#  endif
#else
#  define SMFDFA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum smfdfa_status {
  SMFDFA_OK = 0,
  SMFDFA_INVALID_ARGUMENT = 1,
  SMFDFA_INVALID_CONFIG = 2,
  SMFDFA_EMPTY_INPUT = 10,
  SMFDFA_NON_POSITIVE_PRICE = 11,
  SMFDFA_MISSING_TIMESTAMPS = 12,
  SMFDFA_PARSE_ERROR = 13,
  SMFDFA_IO_ERROR = 14,
  SMFDFA_NON_MONOTONIC_TIMESTAMPS = 15,
  SMFDFA_NON_FINITE_VALUE = 16,
  SMFDFA_SERIES_TOO_SHORT = 17,
  SMFDFA_SCALE_TOO_LARGE = 20,
  SMFDFA_TOO_FEW_POINTS = 21,
  SMFDFA_SINGULAR_FIT = 22,
  SMFDFA_ALL_SEGMENTS_EXCLUDED = 23,
  SMFDFA_INSUFFICIENT_SCALES = 24,
  SMFDFA_NON_FINITE_SURFACE = 25,
  SMFDFA_GRID_TOO_SMALL = 26,
  SMFDFA_GRID_MISMATCH = 27,
  SMFDFA_EMBEDDING_NOT_POSITIVE = 28,
  SMFDFA_INTERNAL = 99
} smfdfa_status;

typedef enum smfdfa_mode { SMFDFA_MODE_STANDARD = 0, SMFDFA_MODE_SIGNED = 1 } smfdfa_mode;

typedef enum smfdfa_channel {
  SMFDFA_CHANNEL_POSITIVE = 0,
  SMFDFA_CHANNEL_NEGATIVE = 1,
  SMFDFA_CHANNEL_UNSIGNED = 2
} smfdfa_channel;

typedef enum smfdfa_zero_policy {
  SMFDFA_ZERO_EXCLUDE = 0,
  SMFDFA_ZERO_TO_POSITIVE = 1,
  SMFDFA_ZERO_TO_NEGATIVE = 2
} smfdfa_zero_policy;

typedef enum smfdfa_normalization {
  SMFDFA_NORM_SEGMENT_LENGTH = 0, /* divide by s */
  SMFDFA_NORM_SUBSET_LENGTH = 1   /* divide by the sign-subset size */
} smfdfa_normalization;

typedef enum smfdfa_input_kind { SMFDFA_INPUT_PRICES = 0, SMFDFA_INPUT_RETURNS = 1 } smfdfa_input_kind;

typedef struct smfdfa_series smfdfa_series;
typedef struct smfdfa_config smfdfa_config;
typedef struct smfdfa_analysis smfdfa_analysis;

typedef struct smfdfa_metrics {
  double alpha_max;
  double delta_alpha;
  double left_width;
  double right_width;
  double asymmetry;
  int concavity_violation;
} smfdfa_metrics;

SMFDFA_API const char* smfdfa_version(void);
/* CamelCase name of a status, e.g. "EmptyInput". */
SMFDFA_API const char* smfdfa_status_name(smfdfa_status status);
SMFDFA_API const char* smfdfa_last_error(void);

/* ---- series ---------------------------------------------------------- */

/* Reads a two-column CSV. Prices are converted to log-returns. delimiter is
 * ',' or ';', or 0 to detect it. */
SMFDFA_API smfdfa_status smfdfa_series_read_csv(const char* path, smfdfa_input_kind kind, char delimiter,
                                                smfdfa_series** out);
SMFDFA_API smfdfa_status smfdfa_series_from_values(const double* values, size_t length, smfdfa_series** out);
SMFDFA_API smfdfa_status smfdfa_series_from_prices(const double* timestamps, const double* prices, size_t length,
                                                   smfdfa_series** out);
SMFDFA_API void smfdfa_series_free(smfdfa_series* series);

SMFDFA_API size_t smfdfa_series_length(const smfdfa_series* series);
/* Copies min(capacity, length) values. */
SMFDFA_API size_t smfdfa_series_values(const smfdfa_series* series, double* buffer, size_t capacity);
SMFDFA_API size_t smfdfa_series_overnight_removed(const smfdfa_series* series);

/* Gap rule: drop returns spanning more than gap_factor median intervals. */
SMFDFA_API smfdfa_status smfdfa_series_filter_gaps(const smfdfa_series* series, double gap_factor,
                                                   smfdfa_series** out);
/* Session rule with a calendar file ("mon 09:00 17:30" per line). */
SMFDFA_API smfdfa_status smfdfa_series_filter_calendar(const smfdfa_series* series, const char* calendar_path,
                                                       smfdfa_series** out);
SMFDFA_API smfdfa_status smfdfa_series_shuffle(const smfdfa_series* series, uint64_t seed, smfdfa_series** out);
/* timestamp,value CSV. */
SMFDFA_API smfdfa_status smfdfa_series_write_csv(const smfdfa_series* series, const char* path);

/* ---- synthetic generators -------------------------------------------- */

SMFDFA_API smfdfa_status smfdfa_synth_cascade(int levels, double weight, smfdfa_series** out);
SMFDFA_API smfdfa_status smfdfa_synth_signed_cascade(int levels, double weight, uint64_t seed,
                                                     smfdfa_series** out);
SMFDFA_API smfdfa_status smfdfa_synth_fgn(double hurst, size_t length, uint64_t seed, smfdfa_series** out);
SMFDFA_API smfdfa_status smfdfa_synth_gaussian(size_t length, uint64_t seed, smfdfa_series** out);
SMFDFA_API double smfdfa_analytic_binomial_hurst(double q, double weight);

/* ---- configuration --------------------------------------------------- */

/* Defaults: signed mode, q in [-10, 10] step 0.25, order 2, default scale
 * grid, zeros excluded, divide by s, one thread. */
SMFDFA_API smfdfa_status smfdfa_config_new(smfdfa_config** out);
SMFDFA_API void smfdfa_config_free(smfdfa_config* config);
SMFDFA_API smfdfa_status smfdfa_config_set_mode(smfdfa_config* config, smfdfa_mode mode);
SMFDFA_API smfdfa_status smfdfa_config_set_q_range(smfdfa_config* config, double q_min, double q_max, double step);
SMFDFA_API smfdfa_status smfdfa_config_set_q_grid(smfdfa_config* config, const double* q, size_t count);
SMFDFA_API smfdfa_status smfdfa_config_set_poly_order(smfdfa_config* config, int order);
SMFDFA_API smfdfa_status smfdfa_config_set_scales(smfdfa_config* config, const size_t* scales, size_t count);
/* count log-spaced scales in [s_min, s_max]. */
SMFDFA_API smfdfa_status smfdfa_config_set_scale_grid(smfdfa_config* config, size_t s_min, size_t s_max,
                                                      size_t count);
SMFDFA_API smfdfa_status smfdfa_config_set_fit_range(smfdfa_config* config, size_t s_min, size_t s_max);
SMFDFA_API smfdfa_status smfdfa_config_set_zero_policy(smfdfa_config* config, smfdfa_zero_policy policy);
SMFDFA_API smfdfa_status smfdfa_config_set_normalization(smfdfa_config* config, smfdfa_normalization norm);
SMFDFA_API smfdfa_status smfdfa_config_set_min_points(smfdfa_config* config, size_t min_points);
SMFDFA_API smfdfa_status smfdfa_config_set_threads(smfdfa_config* config, unsigned threads);

/* ---- analysis -------------------------------------------------------- */

/* Runs the estimator and the Legendre transform. Succeeds when at least one
 * channel produced a spectrum; per-channel failures are reported by
 * smfdfa_analysis_channel_status. */
SMFDFA_API smfdfa_status smfdfa_analyze(const smfdfa_series* series, const smfdfa_config* config,
                                        smfdfa_analysis** out);
SMFDFA_API void smfdfa_analysis_free(smfdfa_analysis* analysis);

SMFDFA_API size_t smfdfa_analysis_channel_count(const smfdfa_analysis* analysis);
SMFDFA_API smfdfa_channel smfdfa_analysis_channel(const smfdfa_analysis* analysis, size_t index);
SMFDFA_API smfdfa_status smfdfa_analysis_channel_status(const smfdfa_analysis* analysis, smfdfa_channel channel);
SMFDFA_API size_t smfdfa_analysis_q_count(const smfdfa_analysis* analysis);
SMFDFA_API size_t smfdfa_analysis_q_grid(const smfdfa_analysis* analysis, double* buffer, size_t capacity);
SMFDFA_API size_t smfdfa_analysis_scale_count(const smfdfa_analysis* analysis);
SMFDFA_API size_t smfdfa_analysis_scales(const smfdfa_analysis* analysis, size_t* buffer, size_t capacity);
SMFDFA_API smfdfa_status smfdfa_analysis_hurst(const smfdfa_analysis* analysis, smfdfa_channel channel,
                                               double* buffer, size_t capacity);
SMFDFA_API smfdfa_status smfdfa_analysis_alpha(const smfdfa_analysis* analysis, smfdfa_channel channel,
                                               double* alpha, double* f_alpha, size_t capacity);
/* F_q(s), row-major scales x q, NaN for missing cells. */
SMFDFA_API smfdfa_status smfdfa_analysis_surface(const smfdfa_analysis* analysis, smfdfa_channel channel,
                                                 double* buffer, size_t capacity);
SMFDFA_API smfdfa_status smfdfa_analysis_metrics(const smfdfa_analysis* analysis, smfdfa_channel channel,
                                                 smfdfa_metrics* out);

/* Output files: spectrum CSV (q,h,tau,alpha,f_alpha), fluctuation surface
 * CSV, long-format plot CSV and the metrics JSON document. */
SMFDFA_API smfdfa_status smfdfa_analysis_write_spectrum_csv(const smfdfa_analysis* analysis, smfdfa_channel channel,
                                                            const char* path);
SMFDFA_API smfdfa_status smfdfa_analysis_write_surface_csv(const smfdfa_analysis* analysis, smfdfa_channel channel,
                                                           const char* path);
SMFDFA_API smfdfa_status smfdfa_analysis_write_plot_csv(const smfdfa_analysis* analysis, const char* path);
SMFDFA_API smfdfa_status smfdfa_analysis_write_metrics_json(const smfdfa_analysis* analysis, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* SMFDFA_H */
