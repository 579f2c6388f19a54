#include "smfdfa/analysis.hpp"

#include <algorithm>

namespace smfdfa {

const ChannelAnalysis* Analysis::find(Channel channel) const {
  for (const auto& c : channels) {
    if (c.channel() == channel) return &c;
  }
  return nullptr;
}

Analysis analyze(const ReturnSeries& series, const EngineConfig& config) {
  MfdfaResult engine = run_mfdfa(series, config);
  Analysis analysis;
  analysis.config = engine.config;
  analysis.series_length = engine.series_length;
  for (auto& channel : engine.channels) {
    ChannelAnalysis out;
    out.engine = std::move(channel);
    if (out.engine.ok()) {
      try {
        out.tau = tau_from_hurst(*out.engine.hurst);
        out.spectrum = legendre(*out.tau);
      } catch (const Error& e) {
        out.engine.error = e.code();
        out.engine.detail = e.what();
        out.tau.reset();
        out.spectrum.reset();
      }
    }
    analysis.channels.push_back(std::move(out));
  }
  if (std::none_of(analysis.channels.begin(), analysis.channels.end(),
                   [](const ChannelAnalysis& c) { return c.ok(); })) {
    throw Error(analysis.channels.front().engine.error, analysis.channels.front().engine.detail);
  }
  const auto* positive = analysis.find(Channel::Positive);
  const auto* negative = analysis.find(Channel::Negative);
  if (positive && negative && positive->spectrum && negative->spectrum) {
    analysis.comparison = compare_channels(*positive->spectrum, *negative->spectrum);
  }
  return analysis;
}

}  // namespace smfdfa
