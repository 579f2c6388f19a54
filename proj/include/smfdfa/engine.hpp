#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smfdfa/error.hpp"
#include "smfdfa/timeseries.hpp"

namespace smfdfa {

enum class Mode { Standard, Signed };
enum class ZeroPolicy { Exclude, ToPositive, ToNegative };
// Divisor of the residual sum of squares: the segment length s, or the
// number of points in the sign-selected profile.
enum class Normalization { PaperOneOverS, SubsetOneOverN };
enum class Channel { Positive, Negative, Unsigned };
enum class Direction { Forward, Backward };

const char* to_string(Mode mode);
const char* to_string(ZeroPolicy policy);
const char* to_string(Normalization normalization);
const char* to_string(Channel channel);

using ScaleRange = std::pair<std::size_t, std::size_t>;

struct EngineConfig {
  // Empty means the default grid for the series length.
  std::vector<std::size_t> scales;
  std::vector<double> q_grid;
  int poly_order = 2;
  Mode mode = Mode::Signed;
  ZeroPolicy zero_policy = ZeroPolicy::Exclude;
  // Unset means poly_order + 2.
  std::optional<std::size_t> min_points_per_fit;
  Normalization normalization = Normalization::PaperOneOverS;
  // Inclusive bounds on s; unset means the whole scale grid.
  std::optional<ScaleRange> fit_range;
  // Worker threads for the per-scale loop. Results do not depend on it.
  unsigned threads = 1;

  EngineConfig();
};

// Evenly spaced q values from min to max inclusive.
std::vector<double> make_q_grid(double q_min, double q_max, double step);
std::vector<double> default_q_grid();

// `count` log-spaced integers in [s_min, s_max], rounded and deduplicated.
std::vector<std::size_t> log_spaced_scales(std::size_t s_min, std::size_t s_max, std::size_t count);
std::vector<std::size_t> default_scales(std::size_t series_length, int poly_order);

// Fills defaults and checks every invariant against the series length.
EngineConfig resolve_config(const EngineConfig& config, std::size_t series_length);

struct Segment {
  std::size_t begin = 0;
  std::size_t length = 0;
  Direction direction = Direction::Forward;
};

// M = floor(n / s) windows anchored at the start followed by M anchored at
// the end.
std::vector<Segment> segment(std::size_t series_length, std::size_t s);
inline std::vector<Segment> segment(const ReturnSeries& series, std::size_t s) {
  return segment(series.size(), s);
}

struct SignProfiles {
  std::vector<double> positive;  // Y_p, one entry per selected position
  std::vector<double> negative;  // Y_n
  std::size_t zeros_excluded = 0;

  std::size_t positive_count() const { return positive.size(); }
  std::size_t negative_count() const { return negative.size(); }
};

SignProfiles sign_profiles(std::span<const double> segment, ZeroPolicy policy);

// Least-squares residual of an order-`order` polynomial fitted to
// (k, profile[k-1]), k = 1..n, squared and divided by s or by n.
double detrended_variance(std::span<const double> profile, int order, std::size_t s,
                          Normalization normalization);

struct MomentResult {
  std::optional<double> value;  // nullopt when no segment is usable
  std::size_t used = 0;
  std::size_t zero_excluded = 0;
};

// Generalized mean {mean (F^2)^(q/2)}^(1/q), geometric limit at q = 0.
// Zero variances are dropped for q <= 0.
MomentResult fluctuation_moment(std::span<const double> variances, double q);

// Throws AllSegmentsExcluded when no usable segment remains.
double fluctuation_function(std::span<const double> variances, double q);

struct ScaleStats {
  std::size_t segments_total = 0;
  std::size_t segments_used = 0;
  std::size_t segments_too_few_points = 0;
};

class FluctuationSurface {
 public:
  FluctuationSurface() = default;
  FluctuationSurface(Channel channel, std::vector<double> q_grid, std::vector<std::size_t> scales);

  Channel channel() const { return channel_; }
  const std::vector<double>& q_grid() const { return q_grid_; }
  const std::vector<std::size_t>& scales() const { return scales_; }

  // F_q(s); NaN marks a missing cell.
  double value(std::size_t q_index, std::size_t s_index) const {
    return values_[s_index * q_grid_.size() + q_index];
  }
  bool missing(std::size_t q_index, std::size_t s_index) const;
  std::size_t zero_excluded(std::size_t q_index, std::size_t s_index) const {
    return zero_excluded_[s_index * q_grid_.size() + q_index];
  }
  const ScaleStats& scale_stats(std::size_t s_index) const { return stats_[s_index]; }
  // Per-segment F^2(v, s) of the used segments, in segment order.
  const std::vector<double>& variances(std::size_t s_index) const { return variances_[s_index]; }

  bool all_missing() const;
  // Largest relative drop F_q(s) - F_q'(s) over q < q'; <= 0 when the
  // surface is monotone.
  double worst_monotonicity_violation() const;

  void set_scale(std::size_t s_index, std::vector<double> variances, ScaleStats stats);

 private:
  Channel channel_ = Channel::Unsigned;
  std::vector<double> q_grid_;
  std::vector<std::size_t> scales_;
  std::vector<double> values_;
  std::vector<std::size_t> zero_excluded_;
  std::vector<ScaleStats> stats_;
  std::vector<std::vector<double>> variances_;
};

struct FitDiagnostics {
  double slope_stderr = 0.0;
  double r_squared = 0.0;
  double intercept = 0.0;
  ScaleRange range{0, 0};
  std::size_t points = 0;
};

struct HurstSpectrum {
  Channel channel = Channel::Unsigned;
  std::vector<double> q_grid;
  std::vector<double> h;
  std::vector<FitDiagnostics> fits;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double r_squared = 0.0;
};

// Ordinary least squares y = intercept + slope * x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Log-log slope per q over the scales inside `fit_range`.
HurstSpectrum hurst_exponents(const FluctuationSurface& surface, ScaleRange fit_range);

struct ChannelResult {
  Channel channel = Channel::Unsigned;
  FluctuationSurface surface;
  std::optional<HurstSpectrum> hurst;
  ErrorCode error = ErrorCode::Ok;
  std::string detail;

  bool ok() const { return error == ErrorCode::Ok; }
};

struct MfdfaResult {
  EngineConfig config;  // resolved
  std::size_t series_length = 0;
  std::vector<ChannelResult> channels;

  const ChannelResult* find(Channel channel) const;
};

// Fluctuation surface of one channel for a resolved config.
FluctuationSurface fluctuation_surface(std::span<const double> series, const EngineConfig& resolved,
                                       Channel channel);

// Full estimator. Channels that fail carry their error; throws only when
// every channel fails.
MfdfaResult run_mfdfa(const ReturnSeries& series, const EngineConfig& config);

}  // namespace smfdfa
