#include <doctest.h>

#include <cmath>
#include <numeric>

#include "smfdfa/engine.hpp"
#include "smfdfa/synth.hpp"

using namespace smfdfa;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Ok;
}

std::vector<double> vals(const ReturnSeries& s) { return {s.values().begin(), s.values().end()}; }

}  // namespace

TEST_CASE("binomial cascade by hand") {
  CHECK(vals(binomial_cascade({1, 0.75, std::nullopt})) == std::vector<double>{0.75, 0.25});
  CHECK(vals(binomial_cascade({2, 0.75, std::nullopt})) == std::vector<double>{0.5625, 0.1875, 0.1875, 0.0625});
  const auto c = binomial_cascade({3, 0.6, std::nullopt});
  CHECK(c.size() == 8);
  CHECK(c.origin_timestamps().front() == 1.0);
  CHECK(c.origin_timestamps().back() == 8.0);
}

TEST_CASE("cascade mass and self-similarity") {
  for (int k = 1; k <= 16; ++k) {
    const auto v = vals(binomial_cascade({k, 0.75, std::nullopt}));
    CHECK(std::accumulate(v.begin(), v.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    if (k == 1) continue;
    // Adjacent pairs of level k rebuild level k - 1.
    const auto coarse = vals(binomial_cascade({k - 1, 0.75, std::nullopt}));
    for (std::size_t i = 0; i < coarse.size(); ++i) {
      CHECK(v[2 * i] + v[2 * i + 1] == doctest::Approx(coarse[i]).epsilon(1e-15));
    }
  }
}

TEST_CASE("cascade argument checks") {
  CHECK(code_of([] { binomial_cascade({0, 0.75, std::nullopt}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { binomial_cascade({27, 0.75, std::nullopt}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { binomial_cascade({4, 0.5, std::nullopt}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { binomial_cascade({4, 1.0, std::nullopt}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { sign_randomized_cascade({4, 0.75, std::nullopt}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("sign-randomised cascade") {
  const auto plain = vals(binomial_cascade({10, 0.75, std::nullopt}));
  const auto a = vals(sign_randomized_cascade({10, 0.75, 9}));
  const auto b = vals(sign_randomized_cascade({10, 0.75, 9}));
  CHECK(a == b);
  std::size_t negatives = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::abs(a[i]) == plain[i]);
    negatives += a[i] < 0.0;
  }
  CHECK(negatives > 400);
  CHECK(negatives < 624);
}

TEST_CASE("closed-form generalized Hurst exponent") {
  CHECK(analytic_binomial_hurst(10, 0.75) == doctest::Approx(0.515035056082812).epsilon(1e-13));
  CHECK(analytic_binomial_hurst(2, 0.6) == doctest::Approx(0.971708235816816).epsilon(1e-13));
  CHECK(analytic_binomial_hurst(0, 0.75) == doctest::Approx(1.20751874963942).epsilon(1e-13));
  CHECK(analytic_binomial_hurst(-10, 0.75) == doctest::Approx(1.90000244319603).epsilon(1e-13));
  // Continuous through q = 0.
  for (double q : {1e-3, 1e-5, 1e-7, -1e-7, -1e-5, -1e-3}) {
    CHECK(std::abs(analytic_binomial_hurst(q, 0.75) - analytic_binomial_hurst(0, 0.75)) <= 2.0 * std::abs(q));
  }
  // h(1) = 1 for any conserving cascade.
  CHECK(analytic_binomial_hurst(1, 0.7) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("fGn autocovariance") {
  CHECK(fgn_autocovariance(0.5, 0) == 1.0);
  CHECK(std::abs(fgn_autocovariance(0.5, 1)) < 1e-15);
  CHECK(std::abs(fgn_autocovariance(0.5, 7)) < 1e-15);
  // 0.5 (2^1.4 - 2).
  CHECK(fgn_autocovariance(0.7, 1) == doctest::Approx(0.5 * (std::pow(2.0, 1.4) - 2.0)).epsilon(1e-14));
}

TEST_CASE("fGn sample autocovariance") {
  const double hurst = 0.7;
  const std::size_t n = 1 << 16;
  const auto x = vals(fgn({hurst, n, 11}));
  // Bartlett standard error of the sample autocorrelation.
  double sum_rho2 = 0.0;
  for (std::size_t j = 1; j < n / 4; ++j) sum_rho2 += std::pow(fgn_autocovariance(hurst, j), 2);
  const double se = std::sqrt((1.0 + 2.0 * sum_rho2) / static_cast<double>(n));
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  double c0 = 0.0;
  for (double v : x) c0 += (v - mean) * (v - mean);
  for (std::size_t k = 1; k <= 10; ++k) {
    double ck = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) ck += (x[i] - mean) * (x[i + k] - mean);
    CHECK(std::abs(ck / c0 - fgn_autocovariance(hurst, k)) <= 4.0 * se);
  }
  CHECK(c0 / static_cast<double>(n) == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("fGn at H = 0.5 is white") {
  const std::size_t n = 1 << 15;
  const auto x = vals(fgn({0.5, n, 3}));
  double c0 = 0.0;
  double c1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    c0 += x[i] * x[i];
    if (i + 1 < n) c1 += x[i] * x[i + 1];
  }
  CHECK(std::abs(c1 / c0) <= 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("fGn recovers its Hurst exponent") {
  EngineConfig config;
  config.mode = Mode::Standard;
  config.q_grid = {2};
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto result = run_mfdfa(fgn({0.7, 1 << 16, seed}), config);
    total += result.channels[0].hurst->h[0];
  }
  CHECK(std::abs(total / 10.0 - 0.7) <= 0.05);
}

TEST_CASE("generators are deterministic") {
  CHECK(vals(fgn({0.3, 1000, 5})) == vals(fgn({0.3, 1000, 5})));
  CHECK(vals(fgn({0.3, 1000, 5})) != vals(fgn({0.3, 1000, 6})));
  CHECK(fgn({0.3, 1000, 5}).size() == 1000);
  CHECK(vals(gaussian_noise(100, 1)) == vals(gaussian_noise(100, 1)));
  CHECK(code_of([] { fgn({1.0, 100, 0}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { fgn({0.5, 0, 0}); }) == ErrorCode::InvalidArgument);
}
