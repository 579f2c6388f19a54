#pragma once

#include <vector>

#include "smfdfa/engine.hpp"

namespace smfdfa {

struct TauFunction {
  Channel channel = Channel::Unsigned;
  std::vector<double> q_grid;
  std::vector<double> tau;
  // Largest second difference of tau; above kConcavityTolerance the
  // estimate is flagged as non-concave.
  double max_second_difference = 0.0;
  bool concave = true;
};

inline constexpr double kConcavityTolerance = 1e-6;

// tau(q) = q h(q) - 1.
TauFunction tau_from_hurst(const HurstSpectrum& hurst);
// Wraps externally supplied tau values (e.g. closed forms) and sets the
// concavity flag.
TauFunction make_tau(Channel channel, std::vector<double> q_grid, std::vector<double> tau);

struct SpectrumPoint {
  double q = 0.0;
  double alpha = 0.0;
  double f = 0.0;
};

struct SpectrumMetrics {
  double alpha_max = 0.0;
  double delta_alpha = 0.0;
  double left_width = 0.0;   // alpha_max - alpha(q_max)
  double right_width = 0.0;  // alpha(q_min) - alpha_max
  double asymmetry = 0.0;    // (right - left) / delta_alpha, 0 for a point spectrum
};

struct SingularitySpectrum {
  Channel channel = Channel::Unsigned;
  std::vector<SpectrumPoint> points;
  std::vector<double> tau;
  SpectrumMetrics metrics;
  bool concavity_violation = false;
  bool alpha_monotone = true;
  bool f_bounded = true;
};

// Derivative of tabulated values: three-point central differences inside,
// three-point one-sided at both ends. Second-order on non-uniform grids.
std::vector<double> differentiate(const std::vector<double>& x, const std::vector<double>& y);

// alpha = tau'(q), f = q alpha - tau. Needs >= 3 grid points.
SingularitySpectrum legendre(const TauFunction& tau);

// alpha_max is alpha at q = 0 when the grid has it, else alpha at the
// largest f.
SpectrumMetrics spectrum_metrics(const SingularitySpectrum& spectrum);

struct ChannelComparison {
  double delta_alpha_max = 0.0;    // alpha_max(negative) - alpha_max(positive)
  double width_difference = 0.0;   // delta_alpha(negative) - delta_alpha(positive)
  std::vector<double> q_grid;
  std::vector<double> alpha_difference;  // alpha_n(q) - alpha_p(q)
};

ChannelComparison compare_channels(const SingularitySpectrum& positive, const SingularitySpectrum& negative);

}  // namespace smfdfa
