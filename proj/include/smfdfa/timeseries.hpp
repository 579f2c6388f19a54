#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace smfdfa {

// Instants are seconds since the Unix epoch, taken as exchange-local wall
// clock (no time-zone conversion is applied anywhere).
using Timestamp = double;

// Daily trading windows in minutes after midnight, indexed Monday = 0.
// A weekday without a window has no session.
class SessionCalendar {
 public:
  struct Window {
    int open_minute = 0;
    int close_minute = 0;
  };

  void set_window(int weekday, Window window);
  const std::optional<Window>& window(int weekday) const { return windows_.at(weekday); }

  // Identifier of the session instance containing t (its day number since the
  // epoch), or nullopt when t falls outside every window. Open and close
  // instants are both inside the session.
  std::optional<std::int64_t> session_of(Timestamp t) const;

  // Parses lines of the form "mon 09:00 17:30". Weekday tokens: mon..sun,
  // "weekdays" (mon-fri) or "all". '#' starts a comment. Later lines
  // override earlier ones.
  static SessionCalendar parse(std::string_view text);

 private:
  std::array<std::optional<Window>, 7> windows_{};
};

class PriceSeries {
 public:
  PriceSeries() = default;
  // Validates: equal lengths, strictly increasing timestamps, prices > 0.
  PriceSeries(std::vector<Timestamp> timestamps, std::vector<double> prices);

  std::size_t size() const { return prices_.size(); }
  const std::vector<Timestamp>& timestamps() const { return timestamps_; }
  const std::vector<double>& prices() const { return prices_; }

 private:
  std::vector<Timestamp> timestamps_;
  std::vector<double> prices_;
};

struct ReturnMeta {
  bool overnight_removed = false;
  std::size_t overnight_removed_count = 0;
  // Sampling interval the gap rule was measured against; reused on later
  // passes so that filtering is idempotent.
  std::optional<double> reference_interval;
  bool shuffled = false;
  std::uint64_t shuffle_seed = 0;
};

// Log-returns with the interval each one spans. Timestamps are optional
// (empty) for series built from bare values.
class ReturnSeries {
 public:
  ReturnSeries() = default;
  explicit ReturnSeries(std::vector<double> values);
  ReturnSeries(std::vector<double> values, std::vector<Timestamp> interval_starts,
               std::vector<Timestamp> origin_timestamps, ReturnMeta meta = {});

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  bool has_timestamps() const { return !origin_timestamps_.empty(); }
  // origin_timestamps()[i] is the end of the interval of return i.
  const std::vector<Timestamp>& origin_timestamps() const { return origin_timestamps_; }
  const std::vector<Timestamp>& interval_starts() const { return interval_starts_; }
  const ReturnMeta& meta() const { return meta_; }

 private:
  std::vector<double> values_;
  std::vector<Timestamp> interval_starts_;
  std::vector<Timestamp> origin_timestamps_;
  ReturnMeta meta_;
};

// values[i] = ln p[i+1] - ln p[i], stamped with the later instant.
ReturnSeries log_returns(const PriceSeries& prices);

// Drops every return whose interval does not lie inside a single session.
ReturnSeries filter_overnight(const ReturnSeries& returns, const SessionCalendar& calendar);

// Calendar-free rule: drops returns whose interval exceeds gap_factor times
// the median interval (or the interval recorded by an earlier pass).
ReturnSeries filter_overnight(const ReturnSeries& returns, double gap_factor = 5.0);

// Fisher-Yates permutation driven by Rng(seed). Timestamps stay in place.
ReturnSeries shuffle(const ReturnSeries& returns, std::uint64_t seed);

}  // namespace smfdfa
