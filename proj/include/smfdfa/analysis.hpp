#pragma once

#include <optional>
#include <vector>

#include "smfdfa/engine.hpp"
#include "smfdfa/spectrum.hpp"

namespace smfdfa {

struct ChannelAnalysis {
  ChannelResult engine;
  std::optional<TauFunction> tau;
  std::optional<SingularitySpectrum> spectrum;

  Channel channel() const { return engine.channel; }
  bool ok() const { return engine.ok(); }
};

struct Analysis {
  EngineConfig config;  // resolved
  std::size_t series_length = 0;
  std::vector<ChannelAnalysis> channels;
  // Present in signed mode when both channels produced a spectrum.
  std::optional<ChannelComparison> comparison;

  const ChannelAnalysis* find(Channel channel) const;
};

// Engine, tau and Legendre transform for every channel of the mode.
Analysis analyze(const ReturnSeries& series, const EngineConfig& config);

}  // namespace smfdfa
