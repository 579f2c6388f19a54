#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "smfdfa/analysis.hpp"
#include "smfdfa/timeseries.hpp"

namespace smfdfa {

struct CsvOptions {
  // ',' or ';'; 0 picks ';' when the first line has semicolons and no commas.
  char delimiter = 0;
};

// Epoch seconds ("1700000000", "1700000000.5") or ISO-8601
// "YYYY-MM-DD[(T| )HH:MM[:SS[.fff]]][Z]", read as exchange-local time.
Timestamp parse_timestamp(std::string_view text);

// Two columns, timestamp then price. A header row is detected when the
// second field of the first line is not a number.
PriceSeries parse_price_csv(std::string_view text, const CsvOptions& options = {});

// Two columns, timestamp then return. Each value spans the interval from
// the previous row's timestamp; the first row reuses the second row's gap.
ReturnSeries parse_return_csv(std::string_view text, const CsvOptions& options = {});

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

// Shortest representation that parses back to the same double.
std::string format_double(double value);

std::string series_csv(const ReturnSeries& series);

// Columns q,h,tau,alpha,f_alpha.
std::string spectrum_csv(const ChannelAnalysis& channel);

struct SpectrumTable {
  std::vector<double> q;
  std::vector<double> h;
  std::vector<double> tau;
  std::vector<double> alpha;
  std::vector<double> f_alpha;
};
SpectrumTable parse_spectrum_csv(std::string_view text);

// Rows are scales, columns q values; missing cells are written as "nan".
std::string surface_csv(const FluctuationSurface& surface);

struct SurfaceTable {
  std::vector<double> q_grid;
  std::vector<std::size_t> scales;
  std::vector<double> values;  // row-major, scales x q
};
SurfaceTable parse_surface_csv(std::string_view text);

// Long format for plotting: channel,q,alpha,f.
std::string plot_csv(const Analysis& analysis);

nlohmann::ordered_json metrics_json(const Analysis& analysis);

}  // namespace smfdfa
