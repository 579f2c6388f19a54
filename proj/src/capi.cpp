#include "smfdfa/smfdfa.h"

#include <algorithm>
#include <cstring>
#include <limits>
#include <new>
#include <string>

#include "smfdfa/analysis.hpp"
#include "smfdfa/error.hpp"
#include "smfdfa/io.hpp"
#include "smfdfa/synth.hpp"
#include "smfdfa/version.hpp"

struct smfdfa_series {
  smfdfa::ReturnSeries series;
};

struct smfdfa_config {
  smfdfa::EngineConfig config;
};

struct smfdfa_analysis {
  smfdfa::Analysis analysis;
};

namespace {

thread_local std::string last_error;

smfdfa_status fail(smfdfa_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
smfdfa_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return SMFDFA_OK;
  } catch (const smfdfa::Error& e) {
    return fail(static_cast<smfdfa_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SMFDFA_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SMFDFA_INTERNAL, e.what());
  }
}

smfdfa_status null_argument(const char* name) {
  return fail(SMFDFA_INVALID_ARGUMENT, std::string(name) + " must not be null");
}

smfdfa::Channel to_channel(smfdfa_channel channel) {
  switch (channel) {
    case SMFDFA_CHANNEL_POSITIVE: return smfdfa::Channel::Positive;
    case SMFDFA_CHANNEL_NEGATIVE: return smfdfa::Channel::Negative;
    case SMFDFA_CHANNEL_UNSIGNED: return smfdfa::Channel::Unsigned;
  }
  throw smfdfa::Error(smfdfa::ErrorCode::InvalidArgument, "unknown channel");
}

const smfdfa::ChannelAnalysis& channel_of(const smfdfa_analysis* analysis, smfdfa_channel channel) {
  if (analysis == nullptr) throw smfdfa::Error(smfdfa::ErrorCode::InvalidArgument, "analysis must not be null");
  const auto* found = analysis->analysis.find(to_channel(channel));
  if (found == nullptr) {
    throw smfdfa::Error(smfdfa::ErrorCode::InvalidArgument, "channel not present in this analysis mode");
  }
  return *found;
}

const smfdfa::ChannelAnalysis& successful_channel(const smfdfa_analysis* analysis, smfdfa_channel channel) {
  const auto& c = channel_of(analysis, channel);
  if (!c.ok()) throw smfdfa::Error(c.engine.error, c.engine.detail);
  return c;
}

void require_capacity(size_t capacity, size_t needed) {
  if (capacity < needed) {
    throw smfdfa::Error(smfdfa::ErrorCode::InvalidArgument,
                        "buffer holds " + std::to_string(capacity) + " values, need " + std::to_string(needed));
  }
}

smfdfa_status emit_series(smfdfa_series** out, smfdfa::ReturnSeries series) {
  *out = new smfdfa_series{std::move(series)};
  return SMFDFA_OK;
}

}  // namespace

extern "C" {

const char* smfdfa_version(void) { return smfdfa::kVersion; }

const char* smfdfa_status_name(smfdfa_status status) {
  // error_name returns views of string literals, so data() is terminated.
  return smfdfa::error_name(static_cast<smfdfa::ErrorCode>(status)).data();
}

const char* smfdfa_last_error(void) { return last_error.c_str(); }

smfdfa_status smfdfa_series_read_csv(const char* path, smfdfa_input_kind kind, char delimiter, smfdfa_series** out) {
  if (path == nullptr) return null_argument("path");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    const std::string text = smfdfa::read_file(path);
    const smfdfa::CsvOptions options{delimiter};
    if (kind == SMFDFA_INPUT_RETURNS) {
      emit_series(out, smfdfa::parse_return_csv(text, options));
    } else {
      emit_series(out, smfdfa::log_returns(smfdfa::parse_price_csv(text, options)));
    }
  });
}

smfdfa_status smfdfa_series_from_values(const double* values, size_t length, smfdfa_series** out) {
  if (out == nullptr) return null_argument("out");
  if (values == nullptr && length > 0) return null_argument("values");
  return guarded([&] { emit_series(out, smfdfa::ReturnSeries(std::vector<double>(values, values + length))); });
}

smfdfa_status smfdfa_series_from_prices(const double* timestamps, const double* prices, size_t length,
                                        smfdfa_series** out) {
  if (out == nullptr) return null_argument("out");
  if ((timestamps == nullptr || prices == nullptr) && length > 0) return null_argument("timestamps/prices");
  return guarded([&] {
    smfdfa::PriceSeries series(std::vector<double>(timestamps, timestamps + length),
                               std::vector<double>(prices, prices + length));
    emit_series(out, smfdfa::log_returns(series));
  });
}

void smfdfa_series_free(smfdfa_series* series) { delete series; }

size_t smfdfa_series_length(const smfdfa_series* series) { return series ? series->series.size() : 0; }

size_t smfdfa_series_values(const smfdfa_series* series, double* buffer, size_t capacity) {
  if (series == nullptr || buffer == nullptr) return 0;
  const auto values = series->series.values();
  const size_t n = std::min(capacity, values.size());
  std::copy_n(values.begin(), n, buffer);
  return n;
}

size_t smfdfa_series_overnight_removed(const smfdfa_series* series) {
  return series ? series->series.meta().overnight_removed_count : 0;
}

smfdfa_status smfdfa_series_filter_gaps(const smfdfa_series* series, double gap_factor, smfdfa_series** out) {
  if (series == nullptr) return null_argument("series");
  if (out == nullptr) return null_argument("out");
  return guarded([&] { emit_series(out, smfdfa::filter_overnight(series->series, gap_factor)); });
}

smfdfa_status smfdfa_series_filter_calendar(const smfdfa_series* series, const char* calendar_path,
                                            smfdfa_series** out) {
  if (series == nullptr) return null_argument("series");
  if (calendar_path == nullptr) return null_argument("calendar_path");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    const auto calendar = smfdfa::SessionCalendar::parse(smfdfa::read_file(calendar_path));
    emit_series(out, smfdfa::filter_overnight(series->series, calendar));
  });
}

smfdfa_status smfdfa_series_shuffle(const smfdfa_series* series, uint64_t seed, smfdfa_series** out) {
  if (series == nullptr) return null_argument("series");
  if (out == nullptr) return null_argument("out");
  return guarded([&] { emit_series(out, smfdfa::shuffle(series->series, seed)); });
}

smfdfa_status smfdfa_series_write_csv(const smfdfa_series* series, const char* path) {
  if (series == nullptr) return null_argument("series");
  if (path == nullptr) return null_argument("path");
  return guarded([&] { smfdfa::write_file(path, smfdfa::series_csv(series->series)); });
}

smfdfa_status smfdfa_synth_cascade(int levels, double weight, smfdfa_series** out) {
  if (out == nullptr) return null_argument("out");
  return guarded([&] { emit_series(out, smfdfa::binomial_cascade({levels, weight, std::nullopt})); });
}

smfdfa_status smfdfa_synth_signed_cascade(int levels, double weight, uint64_t seed, smfdfa_series** out) {
  if (out == nullptr) return null_argument("out");
  return guarded([&] { emit_series(out, smfdfa::sign_randomized_cascade({levels, weight, seed})); });
}

smfdfa_status smfdfa_synth_fgn(double hurst, size_t length, uint64_t seed, smfdfa_series** out) {
  if (out == nullptr) return null_argument("out");
  return guarded([&] { emit_series(out, smfdfa::fgn({hurst, length, seed})); });
}

smfdfa_status smfdfa_synth_gaussian(size_t length, uint64_t seed, smfdfa_series** out) {
  if (out == nullptr) return null_argument("out");
  return guarded([&] { emit_series(out, smfdfa::gaussian_noise(length, seed)); });
}

double smfdfa_analytic_binomial_hurst(double q, double weight) {
  try {
    return smfdfa::analytic_binomial_hurst(q, weight);
  } catch (const smfdfa::Error& e) {
    last_error = e.what();
    return std::numeric_limits<double>::quiet_NaN();
  }
}

smfdfa_status smfdfa_config_new(smfdfa_config** out) {
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = new smfdfa_config{}; });
}

void smfdfa_config_free(smfdfa_config* config) { delete config; }

smfdfa_status smfdfa_config_set_mode(smfdfa_config* config, smfdfa_mode mode) {
  if (config == nullptr) return null_argument("config");
  if (mode != SMFDFA_MODE_STANDARD && mode != SMFDFA_MODE_SIGNED) return fail(SMFDFA_INVALID_CONFIG, "unknown mode");
  config->config.mode = mode == SMFDFA_MODE_STANDARD ? smfdfa::Mode::Standard : smfdfa::Mode::Signed;
  return SMFDFA_OK;
}

smfdfa_status smfdfa_config_set_q_range(smfdfa_config* config, double q_min, double q_max, double step) {
  if (config == nullptr) return null_argument("config");
  return guarded([&] { config->config.q_grid = smfdfa::make_q_grid(q_min, q_max, step); });
}

smfdfa_status smfdfa_config_set_q_grid(smfdfa_config* config, const double* q, size_t count) {
  if (config == nullptr) return null_argument("config");
  if (q == nullptr && count > 0) return null_argument("q");
  config->config.q_grid.assign(q, q + count);
  return SMFDFA_OK;
}

smfdfa_status smfdfa_config_set_poly_order(smfdfa_config* config, int order) {
  if (config == nullptr) return null_argument("config");
  if (order < 0 || order > 10) return fail(SMFDFA_INVALID_CONFIG, "poly_order must be in [0, 10]");
  config->config.poly_order = order;
  return SMFDFA_OK;
}

smfdfa_status smfdfa_config_set_scales(smfdfa_config* config, const size_t* scales, size_t count) {
  if (config == nullptr) return null_argument("config");
  if (scales == nullptr && count > 0) return null_argument("scales");
  config->config.scales.assign(scales, scales + count);
  return SMFDFA_OK;
}

smfdfa_status smfdfa_config_set_scale_grid(smfdfa_config* config, size_t s_min, size_t s_max, size_t count) {
  if (config == nullptr) return null_argument("config");
  return guarded([&] { config->config.scales = smfdfa::log_spaced_scales(s_min, s_max, count); });
}

smfdfa_status smfdfa_config_set_fit_range(smfdfa_config* config, size_t s_min, size_t s_max) {
  if (config == nullptr) return null_argument("config");
  if (s_min > s_max) return fail(SMFDFA_INVALID_CONFIG, "fit range minimum exceeds maximum");
  config->config.fit_range = smfdfa::ScaleRange{s_min, s_max};
  return SMFDFA_OK;
}

smfdfa_status smfdfa_config_set_zero_policy(smfdfa_config* config, smfdfa_zero_policy policy) {
  if (config == nullptr) return null_argument("config");
  switch (policy) {
    case SMFDFA_ZERO_EXCLUDE: config->config.zero_policy = smfdfa::ZeroPolicy::Exclude; break;
    case SMFDFA_ZERO_TO_POSITIVE: config->config.zero_policy = smfdfa::ZeroPolicy::ToPositive; break;
    case SMFDFA_ZERO_TO_NEGATIVE: config->config.zero_policy = smfdfa::ZeroPolicy::ToNegative; break;
    default: return fail(SMFDFA_INVALID_CONFIG, "unknown zero policy");
  }
  return SMFDFA_OK;
}

smfdfa_status smfdfa_config_set_normalization(smfdfa_config* config, smfdfa_normalization norm) {
  if (config == nullptr) return null_argument("config");
  switch (norm) {
    case SMFDFA_NORM_SEGMENT_LENGTH: config->config.normalization = smfdfa::Normalization::PaperOneOverS; break;
    case SMFDFA_NORM_SUBSET_LENGTH: config->config.normalization = smfdfa::Normalization::SubsetOneOverN; break;
    default: return fail(SMFDFA_INVALID_CONFIG, "unknown normalization");
  }
  return SMFDFA_OK;
}

smfdfa_status smfdfa_config_set_min_points(smfdfa_config* config, size_t min_points) {
  if (config == nullptr) return null_argument("config");
  config->config.min_points_per_fit = min_points;
  return SMFDFA_OK;
}

smfdfa_status smfdfa_config_set_threads(smfdfa_config* config, unsigned threads) {
  if (config == nullptr) return null_argument("config");
  config->config.threads = threads == 0 ? 1 : threads;
  return SMFDFA_OK;
}

smfdfa_status smfdfa_analyze(const smfdfa_series* series, const smfdfa_config* config, smfdfa_analysis** out) {
  if (series == nullptr) return null_argument("series");
  if (config == nullptr) return null_argument("config");
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = new smfdfa_analysis{smfdfa::analyze(series->series, config->config)}; });
}

void smfdfa_analysis_free(smfdfa_analysis* analysis) { delete analysis; }

size_t smfdfa_analysis_channel_count(const smfdfa_analysis* analysis) {
  return analysis ? analysis->analysis.channels.size() : 0;
}

smfdfa_channel smfdfa_analysis_channel(const smfdfa_analysis* analysis, size_t index) {
  if (analysis == nullptr || index >= analysis->analysis.channels.size()) return SMFDFA_CHANNEL_UNSIGNED;
  switch (analysis->analysis.channels[index].channel()) {
    case smfdfa::Channel::Positive: return SMFDFA_CHANNEL_POSITIVE;
    case smfdfa::Channel::Negative: return SMFDFA_CHANNEL_NEGATIVE;
    case smfdfa::Channel::Unsigned: return SMFDFA_CHANNEL_UNSIGNED;
  }
  return SMFDFA_CHANNEL_UNSIGNED;
}

smfdfa_status smfdfa_analysis_channel_status(const smfdfa_analysis* analysis, smfdfa_channel channel) {
  try {
    const auto& c = channel_of(analysis, channel);
    if (!c.ok()) last_error = c.engine.detail;
    return static_cast<smfdfa_status>(c.engine.error);
  } catch (const smfdfa::Error& e) {
    return fail(static_cast<smfdfa_status>(e.code()), e.what());
  }
}

size_t smfdfa_analysis_q_count(const smfdfa_analysis* analysis) {
  return analysis ? analysis->analysis.config.q_grid.size() : 0;
}

size_t smfdfa_analysis_q_grid(const smfdfa_analysis* analysis, double* buffer, size_t capacity) {
  if (analysis == nullptr || buffer == nullptr) return 0;
  const auto& q = analysis->analysis.config.q_grid;
  const size_t n = std::min(capacity, q.size());
  std::copy_n(q.begin(), n, buffer);
  return n;
}

size_t smfdfa_analysis_scale_count(const smfdfa_analysis* analysis) {
  return analysis ? analysis->analysis.config.scales.size() : 0;
}

size_t smfdfa_analysis_scales(const smfdfa_analysis* analysis, size_t* buffer, size_t capacity) {
  if (analysis == nullptr || buffer == nullptr) return 0;
  const auto& s = analysis->analysis.config.scales;
  const size_t n = std::min(capacity, s.size());
  std::copy_n(s.begin(), n, buffer);
  return n;
}

smfdfa_status smfdfa_analysis_hurst(const smfdfa_analysis* analysis, smfdfa_channel channel, double* buffer,
                                    size_t capacity) {
  if (buffer == nullptr) return null_argument("buffer");
  return guarded([&] {
    const auto& h = successful_channel(analysis, channel).engine.hurst->h;
    require_capacity(capacity, h.size());
    std::copy(h.begin(), h.end(), buffer);
  });
}

smfdfa_status smfdfa_analysis_alpha(const smfdfa_analysis* analysis, smfdfa_channel channel, double* alpha,
                                    double* f_alpha, size_t capacity) {
  if (alpha == nullptr || f_alpha == nullptr) return null_argument("alpha/f_alpha");
  return guarded([&] {
    const auto& points = successful_channel(analysis, channel).spectrum->points;
    require_capacity(capacity, points.size());
    for (size_t i = 0; i < points.size(); ++i) {
      alpha[i] = points[i].alpha;
      f_alpha[i] = points[i].f;
    }
  });
}

smfdfa_status smfdfa_analysis_surface(const smfdfa_analysis* analysis, smfdfa_channel channel, double* buffer,
                                      size_t capacity) {
  if (buffer == nullptr) return null_argument("buffer");
  return guarded([&] {
    const auto& surface = channel_of(analysis, channel).engine.surface;
    const size_t nq = surface.q_grid().size();
    const size_t ns = surface.scales().size();
    require_capacity(capacity, nq * ns);
    for (size_t si = 0; si < ns; ++si) {
      for (size_t qi = 0; qi < nq; ++qi) buffer[si * nq + qi] = surface.value(qi, si);
    }
  });
}

smfdfa_status smfdfa_analysis_metrics(const smfdfa_analysis* analysis, smfdfa_channel channel, smfdfa_metrics* out) {
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    const auto& spectrum = *successful_channel(analysis, channel).spectrum;
    const auto& m = spectrum.metrics;
    *out = {m.alpha_max, m.delta_alpha, m.left_width, m.right_width, m.asymmetry,
            spectrum.concavity_violation ? 1 : 0};
  });
}

smfdfa_status smfdfa_analysis_write_spectrum_csv(const smfdfa_analysis* analysis, smfdfa_channel channel,
                                                 const char* path) {
  if (path == nullptr) return null_argument("path");
  return guarded([&] { smfdfa::write_file(path, smfdfa::spectrum_csv(successful_channel(analysis, channel))); });
}

smfdfa_status smfdfa_analysis_write_surface_csv(const smfdfa_analysis* analysis, smfdfa_channel channel,
                                                const char* path) {
  if (path == nullptr) return null_argument("path");
  return guarded([&] { smfdfa::write_file(path, smfdfa::surface_csv(channel_of(analysis, channel).engine.surface)); });
}

smfdfa_status smfdfa_analysis_write_plot_csv(const smfdfa_analysis* analysis, const char* path) {
  if (analysis == nullptr) return null_argument("analysis");
  if (path == nullptr) return null_argument("path");
  return guarded([&] { smfdfa::write_file(path, smfdfa::plot_csv(analysis->analysis)); });
}

smfdfa_status smfdfa_analysis_write_metrics_json(const smfdfa_analysis* analysis, const char* path) {
  if (analysis == nullptr) return null_argument("analysis");
  if (path == nullptr) return null_argument("path");
  return guarded([&] { smfdfa::write_file(path, smfdfa::metrics_json(analysis->analysis).dump(2) + "\n"); });
}

}  // extern "C"
