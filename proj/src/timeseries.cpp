#include "smfdfa/timeseries.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <string>

#include "smfdfa/error.hpp"
#include "smfdfa/random.hpp"

namespace smfdfa {

namespace {

constexpr double kSecondsPerDay = 86400.0;

int parse_clock(std::string_view text) {
  const auto colon = text.find(':');
  int hours = -1;
  int minutes = -1;
  if (colon != std::string_view::npos) {
    const auto h = std::from_chars(text.data(), text.data() + colon, hours);
    const auto m = std::from_chars(text.data() + colon + 1, text.data() + text.size(), minutes);
    if (h.ec != std::errc{} || h.ptr != text.data() + colon || m.ec != std::errc{} ||
        m.ptr != text.data() + text.size()) {
      hours = -1;
    }
  }
  if (hours < 0 || hours > 24 || minutes < 0 || minutes > 59 || (hours == 24 && minutes != 0)) {
    throw Error(ErrorCode::ParseError, "bad clock time '" + std::string(text) + "', expected HH:MM");
  }
  return hours * 60 + minutes;
}

std::vector<int> parse_days(const std::string& token) {
  static const std::array<const char*, 7> names = {"mon", "tue", "wed", "thu", "fri", "sat", "sun"};
  std::string lower = token;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "all") return {0, 1, 2, 3, 4, 5, 6};
  if (lower == "weekdays") return {0, 1, 2, 3, 4};
  for (int d = 0; d < 7; ++d) {
    if (lower == names[d]) return {d};
  }
  throw Error(ErrorCode::ParseError, "unknown weekday '" + token + "'");
}

void require_finite(std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(ErrorCode::NonFiniteValue, "non-finite return at index " + std::to_string(i));
    }
  }
}

ReturnSeries keep_where(const ReturnSeries& in, const std::vector<bool>& keep, ReturnMeta meta) {
  std::vector<double> values;
  std::vector<Timestamp> starts;
  std::vector<Timestamp> ends;
  std::size_t removed = 0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (!keep[i]) {
      ++removed;
      continue;
    }
    values.push_back(in.values()[i]);
    starts.push_back(in.interval_starts()[i]);
    ends.push_back(in.origin_timestamps()[i]);
  }
  if (values.empty()) {
    throw Error(ErrorCode::EmptyInput, "overnight filter removed every return");
  }
  meta.overnight_removed = true;
  meta.overnight_removed_count += removed;
  return ReturnSeries(std::move(values), std::move(starts), std::move(ends), meta);
}

}  // namespace

void SessionCalendar::set_window(int weekday, Window window) {
  if (weekday < 0 || weekday > 6) {
    throw Error(ErrorCode::InvalidArgument, "weekday must be in [0, 6]");
  }
  if (window.open_minute < 0 || window.close_minute > 24 * 60 ||
      window.open_minute >= window.close_minute) {
    throw Error(ErrorCode::InvalidArgument, "session must open before it closes");
  }
  windows_[weekday] = window;
}

std::optional<std::int64_t> SessionCalendar::session_of(Timestamp t) const {
  const double day_floor = std::floor(t / kSecondsPerDay);
  const auto day = static_cast<std::int64_t>(day_floor);
  // 1970-01-01 was a Thursday.
  const int weekday = static_cast<int>(((day + 3) % 7 + 7) % 7);
  const auto& window = windows_[weekday];
  if (!window) return std::nullopt;
  const double second_of_day = t - day_floor * kSecondsPerDay;
  if (second_of_day < window->open_minute * 60.0 || second_of_day > window->close_minute * 60.0) {
    return std::nullopt;
  }
  return day;
}

SessionCalendar SessionCalendar::parse(std::string_view text) {
  SessionCalendar calendar;
  std::istringstream lines{std::string(text)};
  std::string line;
  int line_no = 0;
  bool any = false;
  while (std::getline(lines, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string day;
    std::string open;
    std::string close;
    if (!(fields >> day)) continue;
    std::string extra;
    if (!(fields >> open >> close) || (fields >> extra)) {
      throw Error(ErrorCode::ParseError,
                  "calendar line " + std::to_string(line_no) + ": expected '<day> HH:MM HH:MM'");
    }
    const Window window{parse_clock(open), parse_clock(close)};
    for (int d : parse_days(day)) calendar.set_window(d, window);
    any = true;
  }
  if (!any) throw Error(ErrorCode::ParseError, "calendar defines no sessions");
  return calendar;
}

PriceSeries::PriceSeries(std::vector<Timestamp> timestamps, std::vector<double> prices)
    : timestamps_(std::move(timestamps)), prices_(std::move(prices)) {
  if (timestamps_.size() != prices_.size()) {
    throw Error(ErrorCode::InvalidArgument, "timestamps and prices differ in length");
  }
  for (std::size_t i = 0; i < prices_.size(); ++i) {
    if (!(prices_[i] > 0.0) || !std::isfinite(prices_[i])) {
      throw Error(ErrorCode::NonPositivePrice, "price at row " + std::to_string(i) + " is not a positive number");
    }
    if (i > 0 && !(timestamps_[i] > timestamps_[i - 1])) {
      throw Error(ErrorCode::NonMonotonicTimestamps,
                  "timestamps not strictly increasing at row " + std::to_string(i));
    }
  }
}

ReturnSeries::ReturnSeries(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw Error(ErrorCode::EmptyInput, "return series is empty");
  require_finite(values_);
}

ReturnSeries::ReturnSeries(std::vector<double> values, std::vector<Timestamp> interval_starts,
                           std::vector<Timestamp> origin_timestamps, ReturnMeta meta)
    : values_(std::move(values)),
      interval_starts_(std::move(interval_starts)),
      origin_timestamps_(std::move(origin_timestamps)),
      meta_(meta) {
  if (values_.empty()) throw Error(ErrorCode::EmptyInput, "return series is empty");
  require_finite(values_);
  const bool stamped = !origin_timestamps_.empty();
  if (stamped && (origin_timestamps_.size() != values_.size() ||
                  interval_starts_.size() != values_.size())) {
    throw Error(ErrorCode::InvalidArgument, "timestamps not aligned with return values");
  }
  if (!stamped && !interval_starts_.empty()) {
    throw Error(ErrorCode::InvalidArgument, "interval starts given without end timestamps");
  }
}

ReturnSeries log_returns(const PriceSeries& prices) {
  if (prices.size() < 2) {
    throw Error(ErrorCode::EmptyInput, "need at least 2 prices to form a return");
  }
  const auto& p = prices.prices();
  const auto& t = prices.timestamps();
  std::vector<double> values(p.size() - 1);
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    if (!(p[i] > 0.0) || !(p[i + 1] > 0.0)) {
      throw Error(ErrorCode::NonPositivePrice, "non-positive price at row " + std::to_string(i));
    }
    values[i] = std::log(p[i + 1]) - std::log(p[i]);
  }
  std::vector<Timestamp> starts(t.begin(), t.end() - 1);
  std::vector<Timestamp> ends(t.begin() + 1, t.end());
  return ReturnSeries(std::move(values), std::move(starts), std::move(ends));
}

ReturnSeries filter_overnight(const ReturnSeries& returns, const SessionCalendar& calendar) {
  if (!returns.has_timestamps()) {
    throw Error(ErrorCode::MissingTimestamps, "calendar filtering needs timestamped returns");
  }
  std::vector<bool> keep(returns.size());
  for (std::size_t i = 0; i < returns.size(); ++i) {
    const auto begin = calendar.session_of(returns.interval_starts()[i]);
    const auto end = calendar.session_of(returns.origin_timestamps()[i]);
    keep[i] = begin && end && *begin == *end;
  }
  return keep_where(returns, keep, returns.meta());
}

ReturnSeries filter_overnight(const ReturnSeries& returns, double gap_factor) {
  if (!returns.has_timestamps()) {
    throw Error(ErrorCode::MissingTimestamps, "gap filtering needs timestamped returns");
  }
  if (!(gap_factor > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "gap factor must be positive");
  }
  const auto& starts = returns.interval_starts();
  const auto& ends = returns.origin_timestamps();
  std::vector<double> gaps(returns.size());
  for (std::size_t i = 0; i < gaps.size(); ++i) gaps[i] = ends[i] - starts[i];

  ReturnMeta meta = returns.meta();
  if (!meta.reference_interval) {
    std::vector<double> sorted = gaps;
    const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2);
    std::nth_element(sorted.begin(), mid, sorted.end());
    double median = *mid;
    if (sorted.size() % 2 == 0) {
      median = 0.5 * (median + *std::max_element(sorted.begin(), mid));
    }
    meta.reference_interval = median;
  }
  const double limit = gap_factor * *meta.reference_interval;
  std::vector<bool> keep(gaps.size());
  for (std::size_t i = 0; i < gaps.size(); ++i) keep[i] = gaps[i] <= limit;
  return keep_where(returns, keep, meta);
}

ReturnSeries shuffle(const ReturnSeries& returns, std::uint64_t seed) {
  std::vector<double> values(returns.values().begin(), returns.values().end());
  Rng rng(seed);
  for (std::size_t i = values.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(values[i - 1], values[j]);
  }
  ReturnMeta meta = returns.meta();
  meta.shuffled = true;
  meta.shuffle_seed = seed;
  return ReturnSeries(std::move(values), returns.interval_starts(), returns.origin_timestamps(), meta);
}

}  // namespace smfdfa
