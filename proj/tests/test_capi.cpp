#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "smfdfa/smfdfa.h"

namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const auto dir = fs::temp_directory_path() / "smfdfa_capi_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::string(smfdfa_version()) == "0.1.0");
  CHECK(std::string(smfdfa_status_name(SMFDFA_OK)) == "Ok");
  CHECK(std::string(smfdfa_status_name(SMFDFA_EMPTY_INPUT)) == "EmptyInput");
  CHECK(std::string(smfdfa_status_name(SMFDFA_ALL_SEGMENTS_EXCLUDED)) == "AllSegmentsExcluded");
}

TEST_CASE("null arguments are rejected") {
  smfdfa_series* series = nullptr;
  CHECK(smfdfa_series_from_values(nullptr, 3, &series) == SMFDFA_INVALID_ARGUMENT);
  CHECK(series == nullptr);
  CHECK(std::string(smfdfa_last_error()).find("values") != std::string::npos);
  CHECK(smfdfa_series_read_csv(nullptr, SMFDFA_INPUT_PRICES, 0, &series) == SMFDFA_INVALID_ARGUMENT);
  CHECK(smfdfa_analyze(nullptr, nullptr, nullptr) == SMFDFA_INVALID_ARGUMENT);
  CHECK(smfdfa_series_length(nullptr) == 0);
  smfdfa_series_free(nullptr);
  smfdfa_config_free(nullptr);
  smfdfa_analysis_free(nullptr);
}

TEST_CASE("errors map to status codes") {
  smfdfa_series* series = nullptr;
  const double values[] = {0.1, NAN};
  CHECK(smfdfa_series_from_values(values, 2, &series) == SMFDFA_NON_FINITE_VALUE);
  CHECK(smfdfa_series_from_values(values, 0, &series) == SMFDFA_EMPTY_INPUT);
  const double ts[] = {1, 2, 3};
  const double px[] = {100, -1, 102};
  CHECK(smfdfa_series_from_prices(ts, px, 3, &series) == SMFDFA_NON_POSITIVE_PRICE);
  CHECK(smfdfa_synth_cascade(4, 0.4, &series) == SMFDFA_INVALID_ARGUMENT);
  CHECK(smfdfa_series_read_csv("/nonexistent.csv", SMFDFA_INPUT_PRICES, 0, &series) == SMFDFA_IO_ERROR);

  const auto empty = scratch_dir() / "empty.csv";
  std::ofstream(empty).close();
  CHECK(smfdfa_series_read_csv(empty.string().c_str(), SMFDFA_INPUT_PRICES, 0, &series) == SMFDFA_EMPTY_INPUT);

  smfdfa_config* config = nullptr;
  REQUIRE(smfdfa_config_new(&config) == SMFDFA_OK);
  CHECK(smfdfa_config_set_q_range(config, 1, -1, 0.5) == SMFDFA_INVALID_CONFIG);
  CHECK(smfdfa_config_set_poly_order(config, -1) == SMFDFA_INVALID_CONFIG);

  // Too short for the default scale grid.
  REQUIRE(smfdfa_synth_gaussian(40, 1, &series) == SMFDFA_OK);
  smfdfa_analysis* analysis = nullptr;
  CHECK(smfdfa_analyze(series, config, &analysis) == SMFDFA_SERIES_TOO_SHORT);
  CHECK(analysis == nullptr);
  smfdfa_series_free(series);
  smfdfa_config_free(config);
}

TEST_CASE("full pipeline through handles") {
  smfdfa_series* series = nullptr;
  REQUIRE(smfdfa_synth_gaussian(1 << 13, 7, &series) == SMFDFA_OK);
  CHECK(smfdfa_series_length(series) == 8192);

  smfdfa_config* config = nullptr;
  REQUIRE(smfdfa_config_new(&config) == SMFDFA_OK);
  REQUIRE(smfdfa_config_set_q_range(config, -4, 4, 0.5) == SMFDFA_OK);
  REQUIRE(smfdfa_config_set_scale_grid(config, 16, 1024, 12) == SMFDFA_OK);
  REQUIRE(smfdfa_config_set_threads(config, 2) == SMFDFA_OK);

  smfdfa_analysis* analysis = nullptr;
  REQUIRE(smfdfa_analyze(series, config, &analysis) == SMFDFA_OK);
  CHECK(smfdfa_analysis_channel_count(analysis) == 2);
  CHECK(smfdfa_analysis_channel(analysis, 0) == SMFDFA_CHANNEL_POSITIVE);
  CHECK(smfdfa_analysis_channel_status(analysis, SMFDFA_CHANNEL_NEGATIVE) == SMFDFA_OK);
  CHECK(smfdfa_analysis_channel_status(analysis, SMFDFA_CHANNEL_UNSIGNED) == SMFDFA_INVALID_ARGUMENT);

  const size_t nq = smfdfa_analysis_q_count(analysis);
  REQUIRE(nq == 17);
  std::vector<double> q(nq);
  CHECK(smfdfa_analysis_q_grid(analysis, q.data(), q.size()) == nq);
  CHECK(q.front() == -4.0);
  CHECK(q.back() == 4.0);

  std::vector<double> h(nq);
  REQUIRE(smfdfa_analysis_hurst(analysis, SMFDFA_CHANNEL_POSITIVE, h.data(), h.size()) == SMFDFA_OK);
  CHECK(std::abs(h[12] - 0.5) < 0.1);
  CHECK(smfdfa_analysis_hurst(analysis, SMFDFA_CHANNEL_POSITIVE, h.data(), 3) == SMFDFA_INVALID_ARGUMENT);

  std::vector<double> alpha(nq);
  std::vector<double> f(nq);
  REQUIRE(smfdfa_analysis_alpha(analysis, SMFDFA_CHANNEL_NEGATIVE, alpha.data(), f.data(), nq) == SMFDFA_OK);
  CHECK(f[8] == 1.0);

  const size_t ns = smfdfa_analysis_scale_count(analysis);
  std::vector<size_t> scales(ns);
  CHECK(smfdfa_analysis_scales(analysis, scales.data(), ns) == ns);
  CHECK(scales.front() == 16);
  std::vector<double> surface(ns * nq);
  REQUIRE(smfdfa_analysis_surface(analysis, SMFDFA_CHANNEL_POSITIVE, surface.data(), surface.size()) == SMFDFA_OK);
  CHECK(surface[0] > 0.0);

  smfdfa_metrics metrics{};
  REQUIRE(smfdfa_analysis_metrics(analysis, SMFDFA_CHANNEL_POSITIVE, &metrics) == SMFDFA_OK);
  CHECK(metrics.alpha_max == doctest::Approx(alpha[8]).epsilon(0.5));
  CHECK(metrics.delta_alpha >= 0.0);

  const auto dir = scratch_dir();
  const auto json = dir / "metrics.json";
  REQUIRE(smfdfa_analysis_write_metrics_json(analysis, json.string().c_str()) == SMFDFA_OK);
  CHECK(slurp(json).find("\"channels\"") != std::string::npos);
  const auto spectrum = dir / "spectrum.csv";
  REQUIRE(smfdfa_analysis_write_spectrum_csv(analysis, SMFDFA_CHANNEL_POSITIVE, spectrum.string().c_str()) ==
          SMFDFA_OK);
  CHECK(slurp(spectrum).rfind("q,h,tau,alpha,f_alpha\n", 0) == 0);

  smfdfa_analysis_free(analysis);
  smfdfa_config_free(config);
  smfdfa_series_free(series);
}

TEST_CASE("failed channel in a signed cascade") {
  smfdfa_series* series = nullptr;
  REQUIRE(smfdfa_synth_cascade(12, 0.75, &series) == SMFDFA_OK);
  smfdfa_config* config = nullptr;
  REQUIRE(smfdfa_config_new(&config) == SMFDFA_OK);
  smfdfa_analysis* analysis = nullptr;
  REQUIRE(smfdfa_analyze(series, config, &analysis) == SMFDFA_OK);
  CHECK(smfdfa_analysis_channel_status(analysis, SMFDFA_CHANNEL_POSITIVE) == SMFDFA_OK);
  CHECK(smfdfa_analysis_channel_status(analysis, SMFDFA_CHANNEL_NEGATIVE) == SMFDFA_ALL_SEGMENTS_EXCLUDED);
  smfdfa_metrics metrics{};
  CHECK(smfdfa_analysis_metrics(analysis, SMFDFA_CHANNEL_NEGATIVE, &metrics) == SMFDFA_ALL_SEGMENTS_EXCLUDED);
  smfdfa_analysis_free(analysis);
  smfdfa_config_free(config);
  smfdfa_series_free(series);
}

TEST_CASE("series transforms") {
  const auto dir = scratch_dir();
  const auto csv = dir / "prices.csv";
  {
    std::ofstream out(csv);
    out << "time,price\n";
    // Two sessions one day apart, one-minute bars.
    for (int day = 0; day < 2; ++day) {
      for (int k = 0; k < 5; ++k) out << 1704706200 + day * 86400 + 60 * k << ',' << 100 + k + day << '\n';
    }
  }
  smfdfa_series* series = nullptr;
  REQUIRE(smfdfa_series_read_csv(csv.string().c_str(), SMFDFA_INPUT_PRICES, 0, &series) == SMFDFA_OK);
  CHECK(smfdfa_series_length(series) == 9);
  smfdfa_series* filtered = nullptr;
  REQUIRE(smfdfa_series_filter_gaps(series, 5.0, &filtered) == SMFDFA_OK);
  CHECK(smfdfa_series_length(filtered) == 8);
  CHECK(smfdfa_series_overnight_removed(filtered) == 1);

  smfdfa_series* shuffled = nullptr;
  REQUIRE(smfdfa_series_shuffle(filtered, 3, &shuffled) == SMFDFA_OK);
  std::vector<double> a(8);
  std::vector<double> b(8);
  smfdfa_series_values(filtered, a.data(), 8);
  smfdfa_series_values(shuffled, b.data(), 8);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);

  const auto out = dir / "series.csv";
  REQUIRE(smfdfa_series_write_csv(shuffled, out.string().c_str()) == SMFDFA_OK);
  smfdfa_series* reread = nullptr;
  REQUIRE(smfdfa_series_read_csv(out.string().c_str(), SMFDFA_INPUT_RETURNS, 0, &reread) == SMFDFA_OK);
  CHECK(smfdfa_series_length(reread) == 8);

  smfdfa_series_free(reread);
  smfdfa_series_free(shuffled);
  smfdfa_series_free(filtered);
  smfdfa_series_free(series);
}
