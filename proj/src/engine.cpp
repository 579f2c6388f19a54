#include "smfdfa/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

namespace smfdfa {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Share of missing cells, or of zero-variance segments dropped for q <= 0,
// above which a log-log fit is refused.
constexpr double kMaxExcludedShare = 0.2;
constexpr std::size_t kMinFitScales = 4;

std::string q_label(double q) {
  std::ostringstream out;
  out << q;
  return out.str();
}

// Orthonormal polynomial basis on k = 1..n (Arnoldi with full
// reorthogonalisation) and projection of profiles onto its complement.
class Detrender {
 public:
  double variance(std::span<const double> y, int order, std::size_t s, Normalization normalization) {
    const std::size_t n = y.size();
    if (order < 0) throw Error(ErrorCode::InvalidArgument, "polynomial order must be >= 0");
    if (n < static_cast<std::size_t>(order) + 2) {
      throw Error(ErrorCode::TooFewPoints, "profile of " + std::to_string(n) +
                                               " points cannot be detrended at order " +
                                               std::to_string(order));
    }
    build_basis(n, order);
    residual_.assign(y.begin(), y.end());
    const std::size_t terms = static_cast<std::size_t>(order) + 1;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < terms; ++j) {
        const double* b = &basis_[j * n];
        double c = 0.0;
        for (std::size_t k = 0; k < n; ++k) c += residual_[k] * b[k];
        for (std::size_t k = 0; k < n; ++k) residual_[k] -= c * b[k];
      }
    }
    double sum = 0.0;
    for (double r : residual_) sum += r * r;
    const double divisor =
        normalization == Normalization::PaperOneOverS ? static_cast<double>(s) : static_cast<double>(n);
    return sum / divisor;
  }

 private:
  void build_basis(std::size_t n, int order) {
    if (n == basis_n_ && order == basis_order_) return;
    const std::size_t terms = static_cast<std::size_t>(order) + 1;
    basis_.assign(terms * n, 0.0);
    abscissa_.resize(n);
    const double centre = 0.5 * (static_cast<double>(n) + 1.0);
    const double half = 0.5 * static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) abscissa_[k] = (static_cast<double>(k + 1) - centre) / half;

    const double c0 = 1.0 / std::sqrt(static_cast<double>(n));
    std::fill(basis_.begin(), basis_.begin() + static_cast<std::ptrdiff_t>(n), c0);
    for (std::size_t j = 1; j < terms; ++j) {
      double* v = &basis_[j * n];
      const double* prev = &basis_[(j - 1) * n];
      for (std::size_t k = 0; k < n; ++k) v[k] = abscissa_[k] * prev[k];
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t i = 0; i < j; ++i) {
          const double* b = &basis_[i * n];
          double c = 0.0;
          for (std::size_t k = 0; k < n; ++k) c += v[k] * b[k];
          for (std::size_t k = 0; k < n; ++k) v[k] -= c * b[k];
        }
      }
      double norm = 0.0;
      for (std::size_t k = 0; k < n; ++k) norm += v[k] * v[k];
      norm = std::sqrt(norm);
      if (!(norm > 0.0)) throw Error(ErrorCode::SingularFit, "degenerate polynomial design");
      for (std::size_t k = 0; k < n; ++k) v[k] /= norm;
    }
    basis_n_ = n;
    basis_order_ = order;
  }

  std::vector<double> basis_;
  std::vector<double> abscissa_;
  std::vector<double> residual_;
  std::size_t basis_n_ = 0;
  int basis_order_ = -1;
};

// Appends the profile of `segment` for `channel` to `out` (cleared first).
void build_profile(std::span<const double> segment, Channel channel, ZeroPolicy policy, double mean,
                   std::vector<double>& out) {
  out.clear();
  double sum = 0.0;
  for (double x : segment) {
    bool take = false;
    switch (channel) {
      case Channel::Unsigned:
        sum += x - mean;
        out.push_back(sum);
        continue;
      case Channel::Positive:
        take = x > 0.0 || (x == 0.0 && policy == ZeroPolicy::ToPositive);
        break;
      case Channel::Negative:
        take = x < 0.0 || (x == 0.0 && policy == ZeroPolicy::ToNegative);
        break;
    }
    if (take) {
      sum += x;
      out.push_back(sum);
    }
  }
}

}  // namespace

const char* to_string(Mode mode) { return mode == Mode::Standard ? "standard" : "signed"; }

const char* to_string(ZeroPolicy policy) {
  switch (policy) {
    case ZeroPolicy::Exclude: return "exclude";
    case ZeroPolicy::ToPositive: return "to_positive";
    case ZeroPolicy::ToNegative: return "to_negative";
  }
  return "exclude";
}

const char* to_string(Normalization normalization) {
  return normalization == Normalization::PaperOneOverS ? "paper_1_over_s" : "subset_1_over_N";
}

const char* to_string(Channel channel) {
  switch (channel) {
    case Channel::Positive: return "positive";
    case Channel::Negative: return "negative";
    case Channel::Unsigned: return "unsigned";
  }
  return "unsigned";
}

EngineConfig::EngineConfig() : q_grid(default_q_grid()) {}

std::vector<double> make_q_grid(double q_min, double q_max, double step) {
  if (!std::isfinite(q_min) || !std::isfinite(q_max) || !std::isfinite(step) || !(step > 0.0) ||
      q_max < q_min) {
    throw Error(ErrorCode::InvalidConfig, "q grid needs finite q_min <= q_max and step > 0");
  }
  const double span = (q_max - q_min) / step;
  const auto intervals = static_cast<std::size_t>(std::llround(span));
  if (std::abs(span - static_cast<double>(intervals)) > 1e-9 * std::max(1.0, span)) {
    throw Error(ErrorCode::InvalidConfig, "q step does not divide [q_min, q_max]");
  }
  std::vector<double> grid(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    // Integer multiples keep exact grid points (including 0) exact.
    grid[i] = q_min + static_cast<double>(i) * step;
    if (std::abs(grid[i]) < 1e-12 * step) grid[i] = 0.0;
  }
  grid.back() = q_max;
  return grid;
}

std::vector<double> default_q_grid() { return make_q_grid(-10.0, 10.0, 0.25); }

std::vector<std::size_t> log_spaced_scales(std::size_t s_min, std::size_t s_max, std::size_t count) {
  if (s_min < 1 || s_max < s_min || count == 0) {
    throw Error(ErrorCode::InvalidConfig, "scale grid needs 1 <= s_min <= s_max and count >= 1");
  }
  std::vector<std::size_t> scales;
  if (count == 1 || s_min == s_max) {
    scales.push_back(s_min);
    return scales;
  }
  const double ratio = std::log(static_cast<double>(s_max) / static_cast<double>(s_min));
  for (std::size_t i = 0; i < count; ++i) {
    const double s = static_cast<double>(s_min) *
                     std::exp(ratio * static_cast<double>(i) / static_cast<double>(count - 1));
    auto rounded = static_cast<std::size_t>(std::llround(s));
    rounded = std::clamp(rounded, s_min, s_max);
    if (scales.empty() || rounded > scales.back()) scales.push_back(rounded);
  }
  return scales;
}

std::vector<std::size_t> default_scales(std::size_t series_length, int poly_order) {
  const std::size_t s_min = std::max<std::size_t>(16, 2 * (static_cast<std::size_t>(poly_order) + 2));
  const std::size_t s_max = series_length / 4;
  if (s_max < s_min) {
    throw Error(ErrorCode::SeriesTooShort, "series of " + std::to_string(series_length) +
                                               " returns is too short for the default scale grid");
  }
  return log_spaced_scales(s_min, s_max, 20);
}

EngineConfig resolve_config(const EngineConfig& config, std::size_t series_length) {
  EngineConfig out = config;
  if (config.poly_order < 0 || config.poly_order > 10) {
    throw Error(ErrorCode::InvalidConfig, "poly_order must be in [0, 10]");
  }
  const std::size_t order = static_cast<std::size_t>(config.poly_order);
  if (out.q_grid.empty()) throw Error(ErrorCode::InvalidConfig, "q grid is empty");
  for (std::size_t i = 0; i < out.q_grid.size(); ++i) {
    if (!std::isfinite(out.q_grid[i]) || (i > 0 && !(out.q_grid[i] > out.q_grid[i - 1]))) {
      throw Error(ErrorCode::InvalidConfig, "q grid must be finite and strictly increasing");
    }
  }
  if (!out.min_points_per_fit) out.min_points_per_fit = order + 2;
  if (*out.min_points_per_fit < order + 2) {
    throw Error(ErrorCode::InvalidConfig, "min_points_per_fit must be at least poly_order + 2");
  }
  if (out.scales.empty()) out.scales = default_scales(series_length, config.poly_order);
  for (std::size_t i = 0; i < out.scales.size(); ++i) {
    if (out.scales[i] < 2 * (order + 2)) {
      throw Error(ErrorCode::InvalidConfig, "scale " + std::to_string(out.scales[i]) +
                                                " is below 2 * (poly_order + 2)");
    }
    if (i > 0 && out.scales[i] <= out.scales[i - 1]) {
      throw Error(ErrorCode::InvalidConfig, "scales must be strictly increasing");
    }
  }
  if (out.scales.back() > series_length / 4) {
    throw Error(ErrorCode::SeriesTooShort, "largest scale " + std::to_string(out.scales.back()) +
                                               " exceeds a quarter of the series length " +
                                               std::to_string(series_length));
  }
  if (!out.fit_range) out.fit_range = ScaleRange{out.scales.front(), out.scales.back()};
  if (out.fit_range->first > out.fit_range->second) {
    throw Error(ErrorCode::InvalidConfig, "fit range minimum exceeds maximum");
  }
  if (out.threads == 0) out.threads = 1;
  return out;
}

std::vector<Segment> segment(std::size_t series_length, std::size_t s) {
  if (s == 0) throw Error(ErrorCode::InvalidArgument, "segment length must be positive");
  if (s > series_length) {
    throw Error(ErrorCode::ScaleTooLarge, "scale " + std::to_string(s) + " exceeds series length " +
                                              std::to_string(series_length));
  }
  const std::size_t count = series_length / s;
  std::vector<Segment> segments;
  segments.reserve(2 * count);
  for (std::size_t v = 0; v < count; ++v) segments.push_back({v * s, s, Direction::Forward});
  for (std::size_t v = 0; v < count; ++v) {
    segments.push_back({series_length - (v + 1) * s, s, Direction::Backward});
  }
  return segments;
}

SignProfiles sign_profiles(std::span<const double> segment, ZeroPolicy policy) {
  SignProfiles profiles;
  build_profile(segment, Channel::Positive, policy, 0.0, profiles.positive);
  build_profile(segment, Channel::Negative, policy, 0.0, profiles.negative);
  profiles.zeros_excluded = segment.size() - profiles.positive.size() - profiles.negative.size();
  return profiles;
}

double detrended_variance(std::span<const double> profile, int order, std::size_t s,
                          Normalization normalization) {
  Detrender detrender;
  return detrender.variance(profile, order, s, normalization);
}

MomentResult fluctuation_moment(std::span<const double> variances, double q) {
  MomentResult result;
  if (q == 0.0) {
    double log_sum = 0.0;
    for (double f2 : variances) {
      if (f2 > 0.0) {
        log_sum += std::log(f2);
        ++result.used;
      } else {
        ++result.zero_excluded;
      }
    }
    if (result.used > 0) result.value = std::exp(log_sum / (2.0 * static_cast<double>(result.used)));
    return result;
  }
  // log-sum-exp of (q/2) ln F^2 keeps |q| = 10 moments inside double range.
  double peak = -std::numeric_limits<double>::infinity();
  bool any_positive = false;
  for (double f2 : variances) {
    if (f2 > 0.0) {
      any_positive = true;
      peak = std::max(peak, 0.5 * q * std::log(f2));
      ++result.used;
    } else if (q < 0.0) {
      ++result.zero_excluded;
    } else {
      ++result.used;
    }
  }
  if (!any_positive) return result;
  double sum = 0.0;
  for (double f2 : variances) {
    if (f2 > 0.0) sum += std::exp(0.5 * q * std::log(f2) - peak);
  }
  const double log_mean = peak + std::log(sum / static_cast<double>(result.used));
  result.value = std::exp(log_mean / q);
  return result;
}

double fluctuation_function(std::span<const double> variances, double q) {
  const MomentResult result = fluctuation_moment(variances, q);
  if (!result.value) {
    throw Error(ErrorCode::AllSegmentsExcluded, "no segment with positive variance at q = " + q_label(q));
  }
  return *result.value;
}

FluctuationSurface::FluctuationSurface(Channel channel, std::vector<double> q_grid,
                                       std::vector<std::size_t> scales)
    : channel_(channel),
      q_grid_(std::move(q_grid)),
      scales_(std::move(scales)),
      values_(q_grid_.size() * scales_.size(), kNaN),
      zero_excluded_(q_grid_.size() * scales_.size(), 0),
      stats_(scales_.size()),
      variances_(scales_.size()) {}

bool FluctuationSurface::missing(std::size_t q_index, std::size_t s_index) const {
  return std::isnan(value(q_index, s_index));
}

bool FluctuationSurface::all_missing() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isnan(v); });
}

double FluctuationSurface::worst_monotonicity_violation() const {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t si = 0; si < scales_.size(); ++si) {
    for (std::size_t qi = 1; qi < q_grid_.size(); ++qi) {
      const double lo = value(qi - 1, si);
      const double hi = value(qi, si);
      if (std::isnan(lo) || std::isnan(hi)) continue;
      worst = std::max(worst, (lo - hi) / lo);
    }
  }
  return worst;
}

void FluctuationSurface::set_scale(std::size_t s_index, std::vector<double> variances, ScaleStats stats) {
  const std::size_t nq = q_grid_.size();
  for (std::size_t qi = 0; qi < nq; ++qi) {
    const MomentResult moment = fluctuation_moment(variances, q_grid_[qi]);
    values_[s_index * nq + qi] = moment.value.value_or(kNaN);
    zero_excluded_[s_index * nq + qi] = moment.zero_excluded;
  }
  stats_[s_index] = stats;
  variances_[s_index] = std::move(variances);
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t m = x.size();
  if (m < 2 || y.size() != m) throw Error(ErrorCode::InvalidArgument, "line fit needs >= 2 paired points");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(m);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(m);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw Error(ErrorCode::SingularFit, "line fit abscissae are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    sse += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  fit.slope_stderr = m > 2 ? std::sqrt(sse / static_cast<double>(m - 2) / sxx) : 0.0;
  return fit;
}

HurstSpectrum hurst_exponents(const FluctuationSurface& surface, ScaleRange fit_range) {
  const auto& scales = surface.scales();
  std::vector<std::size_t> in_range;
  for (std::size_t si = 0; si < scales.size(); ++si) {
    if (scales[si] >= fit_range.first && scales[si] <= fit_range.second) in_range.push_back(si);
  }
  HurstSpectrum spectrum;
  spectrum.channel = surface.channel();
  spectrum.q_grid = surface.q_grid();
  const std::size_t nq = surface.q_grid().size();
  spectrum.h.resize(nq);
  spectrum.fits.resize(nq);
  if (in_range.size() < kMinFitScales) {
    throw Error(ErrorCode::InsufficientScales,
                std::to_string(in_range.size()) + " scales inside the fit range, need " +
                    std::to_string(kMinFitScales));
  }
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t qi = 0; qi < nq; ++qi) {
    x.clear();
    y.clear();
    std::size_t missing = 0;
    std::size_t zero_excluded = 0;
    std::size_t segments = 0;
    for (std::size_t si : in_range) {
      segments += surface.scale_stats(si).segments_used;
      zero_excluded += surface.zero_excluded(qi, si);
      if (surface.missing(qi, si)) {
        ++missing;
        continue;
      }
      x.push_back(std::log(static_cast<double>(scales[si])));
      y.push_back(std::log(surface.value(qi, si)));
    }
    const double q = surface.q_grid()[qi];
    if (static_cast<double>(missing) > kMaxExcludedShare * static_cast<double>(in_range.size()) ||
        (segments > 0 &&
         static_cast<double>(zero_excluded) > kMaxExcludedShare * static_cast<double>(segments))) {
      throw Error(ErrorCode::NonFiniteSurface,
                  std::string(to_string(surface.channel())) + " channel: too many missing cells or "
                  "zero-variance segments in the fit range at q = " + q_label(q));
    }
    if (x.size() < kMinFitScales) {
      throw Error(ErrorCode::InsufficientScales, std::string(to_string(surface.channel())) +
                                                     " channel: fewer than 4 usable scales at q = " +
                                                     q_label(q));
    }
    const LineFit fit = fit_line(x, y);
    spectrum.h[qi] = fit.slope;
    spectrum.fits[qi] = {fit.slope_stderr, fit.r_squared, fit.intercept, fit_range, x.size()};
  }
  return spectrum;
}

const ChannelResult* MfdfaResult::find(Channel channel) const {
  for (const auto& c : channels) {
    if (c.channel == channel) return &c;
  }
  return nullptr;
}

FluctuationSurface fluctuation_surface(std::span<const double> series, const EngineConfig& resolved,
                                       Channel channel) {
  FluctuationSurface surface(channel, resolved.q_grid, resolved.scales);
  const std::size_t n = series.size();
  double mean = 0.0;
  if (channel == Channel::Unsigned) {
    mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
  }
  const std::size_t min_points = resolved.min_points_per_fit.value_or(
      static_cast<std::size_t>(resolved.poly_order) + 2);

  auto compute_scale = [&](std::size_t si, Detrender& detrender, std::vector<double>& profile) {
    const std::size_t s = resolved.scales[si];
    const auto segments = segment(n, s);
    ScaleStats stats;
    stats.segments_total = segments.size();
    std::vector<double> variances;
    variances.reserve(segments.size());
    for (const Segment& seg : segments) {
      build_profile(series.subspan(seg.begin, seg.length), channel, resolved.zero_policy, mean, profile);
      if (profile.size() < min_points) {
        ++stats.segments_too_few_points;
        continue;
      }
      variances.push_back(detrender.variance(profile, resolved.poly_order, s, resolved.normalization));
    }
    stats.segments_used = variances.size();
    surface.set_scale(si, std::move(variances), stats);
  };

  const std::size_t scale_count = resolved.scales.size();
  const unsigned workers = std::min<unsigned>(std::max(1u, resolved.threads),
                                              static_cast<unsigned>(scale_count));
  if (workers <= 1) {
    Detrender detrender;
    std::vector<double> profile;
    for (std::size_t si = 0; si < scale_count; ++si) compute_scale(si, detrender, profile);
    return surface;
  }
  // Each scale is written by exactly one worker into its own slot, so the
  // result does not depend on the schedule.
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> failures(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          Detrender detrender;
          std::vector<double> profile;
          for (std::size_t si = next++; si < scale_count; si = next++) compute_scale(si, detrender, profile);
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  return surface;
}

MfdfaResult run_mfdfa(const ReturnSeries& series, const EngineConfig& config) {
  MfdfaResult result;
  result.config = resolve_config(config, series.size());
  result.series_length = series.size();
  const std::vector<Channel> channels = result.config.mode == Mode::Signed
                                            ? std::vector<Channel>{Channel::Positive, Channel::Negative}
                                            : std::vector<Channel>{Channel::Unsigned};
  for (Channel channel : channels) {
    ChannelResult out;
    out.channel = channel;
    out.surface = fluctuation_surface(series.values(), result.config, channel);
    if (out.surface.all_missing()) {
      out.error = ErrorCode::AllSegmentsExcluded;
      out.detail = std::string(to_string(channel)) + " channel: no segment has a usable fluctuation";
    } else {
      try {
        out.hurst = hurst_exponents(out.surface, *result.config.fit_range);
      } catch (const Error& e) {
        out.error = e.code();
        out.detail = e.what();
      }
    }
    result.channels.push_back(std::move(out));
  }
  const bool any_ok = std::any_of(result.channels.begin(), result.channels.end(),
                                  [](const ChannelResult& c) { return c.ok(); });
  if (!any_ok) {
    throw Error(result.channels.front().error, result.channels.front().detail);
  }
  return result;
}

}  // namespace smfdfa
