#include "smfdfa/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace smfdfa {

namespace {

constexpr double kAlphaOrderTolerance = 1e-9;
constexpr double kFCeiling = 1.0 + 1e-9;

}  // namespace

TauFunction make_tau(Channel channel, std::vector<double> q_grid, std::vector<double> tau) {
  if (q_grid.size() != tau.size()) {
    throw Error(ErrorCode::InvalidArgument, "tau values not aligned with q grid");
  }
  TauFunction out{channel, std::move(q_grid), std::move(tau)};
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < out.tau.size(); ++i) {
    // Change of slope times the mean spacing: the plain second difference
    // on a uniform grid.
    const double left = out.q_grid[i] - out.q_grid[i - 1];
    const double right = out.q_grid[i + 1] - out.q_grid[i];
    const double bend = (out.tau[i + 1] - out.tau[i]) / right - (out.tau[i] - out.tau[i - 1]) / left;
    worst = std::max(worst, bend * 0.5 * (left + right));
  }
  out.max_second_difference = out.tau.size() >= 3 ? worst : 0.0;
  out.concave = out.max_second_difference <= kConcavityTolerance;
  return out;
}

TauFunction tau_from_hurst(const HurstSpectrum& hurst) {
  std::vector<double> tau(hurst.q_grid.size());
  for (std::size_t i = 0; i < tau.size(); ++i) tau[i] = hurst.q_grid[i] * hurst.h[i] - 1.0;
  return make_tau(hurst.channel, hurst.q_grid, std::move(tau));
}

std::vector<double> differentiate(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 3 || y.size() != n) {
    throw Error(ErrorCode::GridTooSmall, "finite differences need at least 3 grid points");
  }
  std::vector<double> d(n);
  {
    const double h1 = x[1] - x[0];
    const double h2 = x[2] - x[1];
    d[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * y[0] + (h1 + h2) / (h1 * h2) * y[1] -
           h1 / (h2 * (h1 + h2)) * y[2];
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = x[i] - x[i - 1];
    const double h2 = x[i + 1] - x[i];
    d[i] = -h2 / (h1 * (h1 + h2)) * y[i - 1] + (h2 - h1) / (h1 * h2) * y[i] +
           h1 / (h2 * (h1 + h2)) * y[i + 1];
  }
  {
    const double h1 = x[n - 2] - x[n - 3];
    const double h2 = x[n - 1] - x[n - 2];
    d[n - 1] = h2 / (h1 * (h1 + h2)) * y[n - 3] - (h1 + h2) / (h1 * h2) * y[n - 2] +
               (2.0 * h2 + h1) / (h2 * (h1 + h2)) * y[n - 1];
  }
  return d;
}

SingularitySpectrum legendre(const TauFunction& tau) {
  const auto alpha = differentiate(tau.q_grid, tau.tau);
  SingularitySpectrum spectrum;
  spectrum.channel = tau.channel;
  spectrum.tau = tau.tau;
  spectrum.concavity_violation = !tau.concave;
  spectrum.points.resize(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const double q = tau.q_grid[i];
    spectrum.points[i] = {q, alpha[i], q * alpha[i] - tau.tau[i]};
    if (spectrum.points[i].f > kFCeiling) spectrum.f_bounded = false;
    if (i > 0 && alpha[i] > alpha[i - 1] + kAlphaOrderTolerance) spectrum.alpha_monotone = false;
  }
  spectrum.metrics = spectrum_metrics(spectrum);
  return spectrum;
}

SpectrumMetrics spectrum_metrics(const SingularitySpectrum& spectrum) {
  const auto& points = spectrum.points;
  if (points.empty()) throw Error(ErrorCode::InvalidArgument, "spectrum has no points");
  auto peak = std::find_if(points.begin(), points.end(), [](const SpectrumPoint& p) { return p.q == 0.0; });
  if (peak == points.end()) {
    peak = std::max_element(points.begin(), points.end(),
                            [](const SpectrumPoint& a, const SpectrumPoint& b) { return a.f < b.f; });
  }
  SpectrumMetrics m;
  m.alpha_max = peak->alpha;
  const double alpha_at_q_min = points.front().alpha;
  const double alpha_at_q_max = points.back().alpha;
  m.delta_alpha = alpha_at_q_min - alpha_at_q_max;
  m.left_width = m.alpha_max - alpha_at_q_max;
  m.right_width = alpha_at_q_min - m.alpha_max;
  m.asymmetry = m.delta_alpha != 0.0 ? (m.right_width - m.left_width) / m.delta_alpha : 0.0;
  return m;
}

ChannelComparison compare_channels(const SingularitySpectrum& positive, const SingularitySpectrum& negative) {
  if (positive.points.size() != negative.points.size()) {
    throw Error(ErrorCode::GridMismatch, "spectra have different q grids");
  }
  ChannelComparison out;
  for (std::size_t i = 0; i < positive.points.size(); ++i) {
    if (positive.points[i].q != negative.points[i].q) {
      throw Error(ErrorCode::GridMismatch, "spectra have different q grids");
    }
    out.q_grid.push_back(positive.points[i].q);
    out.alpha_difference.push_back(negative.points[i].alpha - positive.points[i].alpha);
  }
  out.delta_alpha_max = negative.metrics.alpha_max - positive.metrics.alpha_max;
  out.width_difference = negative.metrics.delta_alpha - positive.metrics.delta_alpha;
  return out;
}

}  // namespace smfdfa
