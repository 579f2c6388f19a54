#include "smfdfa/io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "smfdfa/error.hpp"

namespace smfdfa {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' || s.front() == '"')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"')) {
    s.remove_suffix(1);
  }
  return s;
}

bool parse_number(std::string_view text, double& out) {
  text = trim(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  if (text == "nan" || text == "NaN") {
    out = std::numeric_limits<double>::quiet_NaN();
    return true;
  }
  const auto result = std::from_chars(text.data(), text.data() + text.size(), out);
  return result.ec == std::errc{} && result.ptr == text.data() + text.size();
}

double require_number(std::string_view text, std::size_t line) {
  double value = 0.0;
  if (!parse_number(text, value)) {
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line) + ": '" + std::string(trim(text)) + "' is not a number");
  }
  return value;
}

int read_int(std::string_view text, std::size_t& pos, std::size_t digits) {
  if (pos + digits > text.size()) return -1;
  int value = 0;
  const auto result = std::from_chars(text.data() + pos, text.data() + pos + digits, value);
  if (result.ec != std::errc{} || result.ptr != text.data() + pos + digits) return -1;
  pos += digits;
  return value;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line, char delimiter) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto end = line.find(delimiter, start);
    fields.push_back(line.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return fields;
}

struct Row {
  std::size_t line;
  std::vector<std::string_view> fields;
};

// Non-blank rows after the optional header.
std::vector<Row> table_rows(std::string_view text, char delimiter, std::size_t numeric_field) {
  std::vector<Row> rows;
  bool first = true;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    auto fields = split_fields(lines[i], delimiter);
    if (first) {
      first = false;
      double probe = 0.0;
      if (fields.size() <= numeric_field || !parse_number(fields[numeric_field], probe)) continue;
    }
    rows.push_back({i + 1, std::move(fields)});
  }
  return rows;
}

char pick_delimiter(std::string_view text, const CsvOptions& options) {
  if (options.delimiter != 0) {
    if (options.delimiter != ',' && options.delimiter != ';') {
      throw Error(ErrorCode::InvalidArgument, "delimiter must be ',' or ';'");
    }
    return options.delimiter;
  }
  const auto first_line = text.substr(0, text.find('\n'));
  const bool semicolon = first_line.find(';') != std::string_view::npos;
  const bool comma = first_line.find(',') != std::string_view::npos;
  return semicolon && !comma ? ';' : ',';
}

// Two-column timestamp/value rows.
void parse_two_columns(std::string_view text, const CsvOptions& options, std::vector<Timestamp>& times,
                       std::vector<double>& values) {
  const char delimiter = pick_delimiter(text, options);
  for (const Row& row : table_rows(text, delimiter, 1)) {
    if (row.fields.size() != 2) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(row.line) + ": expected 2 fields, got " +
                                             std::to_string(row.fields.size()));
    }
    try {
      times.push_back(parse_timestamp(row.fields[0]));
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(row.line) + ": " + e.what());
    }
    values.push_back(require_number(row.fields[1], row.line));
  }
  if (values.empty()) throw Error(ErrorCode::EmptyInput, "no data rows");
}

void append_row(std::string& out, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out += ',';
    out += format_double(v);
    first = false;
  }
  out += '\n';
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
  text = trim(text);
  double epoch = 0.0;
  if (parse_number(text, epoch)) {
    if (!std::isfinite(epoch)) throw Error(ErrorCode::ParseError, "timestamp is not finite");
    return epoch;
  }
  const auto fail = [&] {
    return Error(ErrorCode::ParseError, "unrecognised timestamp '" + std::string(text) + "'");
  };
  std::size_t pos = 0;
  const int year = read_int(text, pos, 4);
  if (year < 0 || pos >= text.size() || text[pos++] != '-') throw fail();
  const int month = read_int(text, pos, 2);
  if (month < 0 || pos >= text.size() || text[pos++] != '-') throw fail();
  const int day = read_int(text, pos, 2);
  if (day < 0) throw fail();
  const std::chrono::year_month_day date{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                                         std::chrono::day{static_cast<unsigned>(day)}};
  if (!date.ok()) throw fail();
  double seconds = static_cast<double>(std::chrono::sys_days{date}.time_since_epoch().count()) * 86400.0;
  if (pos == text.size()) return seconds;
  if (text[pos] != 'T' && text[pos] != ' ') throw fail();
  ++pos;
  const int hour = read_int(text, pos, 2);
  if (hour < 0 || hour > 23 || pos >= text.size() || text[pos++] != ':') throw fail();
  const int minute = read_int(text, pos, 2);
  if (minute < 0 || minute > 59) throw fail();
  double second = 0.0;
  if (pos < text.size() && text[pos] == ':') {
    ++pos;
    std::size_t end = pos;
    while (end < text.size() && (std::isdigit(static_cast<unsigned char>(text[end])) || text[end] == '.')) ++end;
    if (end == pos || !parse_number(text.substr(pos, end - pos), second) || second < 0.0 || second >= 61.0) {
      throw fail();
    }
    pos = end;
  }
  if (pos < text.size() && text[pos] == 'Z') ++pos;
  if (pos != text.size()) throw fail();
  return seconds + hour * 3600.0 + minute * 60.0 + second;
}

PriceSeries parse_price_csv(std::string_view text, const CsvOptions& options) {
  std::vector<Timestamp> times;
  std::vector<double> prices;
  parse_two_columns(text, options, times, prices);
  return PriceSeries(std::move(times), std::move(prices));
}

ReturnSeries parse_return_csv(std::string_view text, const CsvOptions& options) {
  std::vector<Timestamp> ends;
  std::vector<double> values;
  parse_two_columns(text, options, ends, values);
  std::vector<Timestamp> starts(ends.size());
  for (std::size_t i = 0; i < ends.size(); ++i) {
    if (i > 0 && !(ends[i] > ends[i - 1])) {
      throw Error(ErrorCode::NonMonotonicTimestamps, "timestamps not strictly increasing at row " + std::to_string(i));
    }
    if (i > 0) {
      starts[i] = ends[i - 1];
    } else {
      starts[i] = ends.size() > 1 ? ends[0] - (ends[1] - ends[0]) : ends[0] - 1.0;
    }
  }
  return ReturnSeries(std::move(values), std::move(starts), std::move(ends));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

std::string series_csv(const ReturnSeries& series) {
  std::string out = "timestamp,value\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double t = series.has_timestamps() ? series.origin_timestamps()[i] : static_cast<double>(i + 1);
    append_row(out, {t, series.values()[i]});
  }
  return out;
}

std::string spectrum_csv(const ChannelAnalysis& channel) {
  if (!channel.spectrum || !channel.engine.hurst) {
    throw Error(ErrorCode::InvalidArgument, "channel has no spectrum");
  }
  std::string out = "q,h,tau,alpha,f_alpha\n";
  const auto& points = channel.spectrum->points;
  for (std::size_t i = 0; i < points.size(); ++i) {
    append_row(out, {points[i].q, channel.engine.hurst->h[i], channel.spectrum->tau[i], points[i].alpha, points[i].f});
  }
  return out;
}

SpectrumTable parse_spectrum_csv(std::string_view text) {
  SpectrumTable table;
  for (const Row& row : table_rows(text, ',', 0)) {
    if (row.fields.size() != 5) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(row.line) + ": expected 5 fields");
    }
    table.q.push_back(require_number(row.fields[0], row.line));
    table.h.push_back(require_number(row.fields[1], row.line));
    table.tau.push_back(require_number(row.fields[2], row.line));
    table.alpha.push_back(require_number(row.fields[3], row.line));
    table.f_alpha.push_back(require_number(row.fields[4], row.line));
  }
  return table;
}

std::string surface_csv(const FluctuationSurface& surface) {
  std::string out = "s";
  for (double q : surface.q_grid()) out += "," + format_double(q);
  out += '\n';
  for (std::size_t si = 0; si < surface.scales().size(); ++si) {
    out += std::to_string(surface.scales()[si]);
    for (std::size_t qi = 0; qi < surface.q_grid().size(); ++qi) out += "," + format_double(surface.value(qi, si));
    out += '\n';
  }
  return out;
}

SurfaceTable parse_surface_csv(std::string_view text) {
  SurfaceTable table;
  const auto lines = split_lines(text);
  bool header = true;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto fields = split_fields(lines[i], ',');
    if (header) {
      if (fields.empty() || trim(fields[0]) != "s") throw Error(ErrorCode::ParseError, "surface header must start with 's'");
      for (std::size_t f = 1; f < fields.size(); ++f) table.q_grid.push_back(require_number(fields[f], i + 1));
      header = false;
      continue;
    }
    if (fields.size() != table.q_grid.size() + 1) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(i + 1) + ": wrong number of fields");
    }
    table.scales.push_back(static_cast<std::size_t>(require_number(fields[0], i + 1)));
    for (std::size_t f = 1; f < fields.size(); ++f) table.values.push_back(require_number(fields[f], i + 1));
  }
  if (header) throw Error(ErrorCode::EmptyInput, "surface file is empty");
  return table;
}

std::string plot_csv(const Analysis& analysis) {
  std::string out = "channel,q,alpha,f\n";
  for (const auto& channel : analysis.channels) {
    if (!channel.spectrum) continue;
    for (const auto& p : channel.spectrum->points) {
      out += to_string(channel.channel());
      out += ',';
      append_row(out, {p.q, p.alpha, p.f});
    }
  }
  return out;
}

nlohmann::ordered_json metrics_json(const Analysis& analysis) {
  using nlohmann::ordered_json;
  ordered_json root;
  root["mode"] = to_string(analysis.config.mode);
  root["series_length"] = analysis.series_length;
  ordered_json channels = ordered_json::array();
  for (const auto& channel : analysis.channels) {
    ordered_json c;
    c["channel"] = to_string(channel.channel());
    c["status"] = std::string(error_name(channel.engine.error));
    const auto& surface = channel.engine.surface;
    ordered_json segments = ordered_json::array();
    for (std::size_t si = 0; si < surface.scales().size(); ++si) {
      const auto& stats = surface.scale_stats(si);
      std::size_t zero_excluded = 0;
      for (std::size_t qi = 0; qi < surface.q_grid().size(); ++qi) {
        zero_excluded = std::max(zero_excluded, surface.zero_excluded(qi, si));
      }
      segments.push_back({{"s", surface.scales()[si]},
                          {"total", stats.segments_total},
                          {"used", stats.segments_used},
                          {"too_few_points", stats.segments_too_few_points},
                          {"zero_variance_excluded", zero_excluded}});
    }
    if (!channel.ok()) {
      c["detail"] = channel.engine.detail;
      c["diagnostics"] = {{"segments", segments}};
      channels.push_back(std::move(c));
      continue;
    }
    const auto& m = channel.spectrum->metrics;
    c["alpha_max"] = m.alpha_max;
    c["delta_alpha"] = m.delta_alpha;
    c["left_width"] = m.left_width;
    c["right_width"] = m.right_width;
    c["asymmetry"] = m.asymmetry;
    const auto& hurst = *channel.engine.hurst;
    ordered_json h;
    ordered_json stderr_by_q;
    ordered_json r2_by_q;
    for (std::size_t i = 0; i < hurst.q_grid.size(); ++i) {
      const auto key = format_double(hurst.q_grid[i]);
      h[key] = hurst.h[i];
      stderr_by_q[key] = hurst.fits[i].slope_stderr;
      r2_by_q[key] = hurst.fits[i].r_squared;
    }
    c["h"] = h;
    ordered_json diagnostics;
    diagnostics["fit_range"] = {hurst.fits.front().range.first, hurst.fits.front().range.second};
    diagnostics["slope_stderr"] = stderr_by_q;
    diagnostics["r_squared"] = r2_by_q;
    diagnostics["concavity_violation"] = channel.spectrum->concavity_violation;
    diagnostics["max_tau_second_difference"] = channel.tau->max_second_difference;
    diagnostics["alpha_monotone"] = channel.spectrum->alpha_monotone;
    diagnostics["f_bounded"] = channel.spectrum->f_bounded;
    diagnostics["moment_monotonicity_violation"] = std::max(0.0, surface.worst_monotonicity_violation());
    diagnostics["segments"] = segments;
    c["diagnostics"] = diagnostics;
    channels.push_back(std::move(c));
  }
  root["channels"] = channels;
  if (analysis.comparison) {
    const auto& cmp = *analysis.comparison;
    ordered_json per_q;
    for (std::size_t i = 0; i < cmp.q_grid.size(); ++i) per_q[format_double(cmp.q_grid[i])] = cmp.alpha_difference[i];
    root["comparison"] = {{"delta_alpha_max", cmp.delta_alpha_max},
                          {"width_difference", cmp.width_difference},
                          {"alpha_difference", per_q}};
  }
  return root;
}

}  // namespace smfdfa
