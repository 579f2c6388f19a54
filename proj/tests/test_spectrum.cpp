#include <doctest.h>

#include <cmath>

#include "smfdfa/analysis.hpp"
#include "smfdfa/spectrum.hpp"
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

HurstSpectrum flat_hurst(const std::vector<double>& q, double h) {
  HurstSpectrum out;
  out.q_grid = q;
  out.h.assign(q.size(), h);
  out.fits.resize(q.size());
  return out;
}

TauFunction cascade_tau(const std::vector<double>& q, double a) {
  std::vector<double> tau(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) tau[i] = q[i] * analytic_binomial_hurst(q[i], a) - 1.0;
  return make_tau(Channel::Unsigned, q, std::move(tau));
}

std::size_t index_of(const std::vector<double>& q, double value) {
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] == value) return i;
  }
  return q.size();
}

}  // namespace

TEST_CASE("tau from h") {
  const auto tau = tau_from_hurst(flat_hurst({-1, 0, 2}, 0.5));
  CHECK(tau.tau == std::vector<double>{-1.5, -1.0, 0.0});
  CHECK(tau.concave);
  CHECK(tau.max_second_difference == doctest::Approx(0.0));
}

TEST_CASE("differentiate") {
  SUBCASE("exact on quadratics, uniform and not") {
    const std::vector<double> x{-2.0, -1.5, -0.25, 0.0, 1.0, 3.5};
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = 3.0 - 2.0 * x[i] + 0.75 * x[i] * x[i];
    const auto d = differentiate(x, y);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(d[i] == doctest::Approx(-2.0 + 1.5 * x[i]).epsilon(1e-13));
  }
  CHECK(code_of([] { differentiate({0.0, 1.0}, {0.0, 1.0}); }) == ErrorCode::GridTooSmall);
}

TEST_CASE("monofractal spectrum collapses to a point") {
  const auto q = make_q_grid(-4, 4, 0.5);
  const auto spectrum = legendre(tau_from_hurst(flat_hurst(q, 0.62)));
  for (const auto& p : spectrum.points) {
    CHECK(p.alpha == doctest::Approx(0.62).epsilon(1e-13));
    CHECK(p.f == doctest::Approx(1.0).epsilon(1e-13));
  }
  CHECK(spectrum.metrics.delta_alpha == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(spectrum.metrics.asymmetry == 0.0);
  CHECK(spectrum.f_bounded);
}

TEST_CASE("binomial cascade spectrum matches the closed form") {
  const auto q = make_q_grid(-10, 10, 0.001);
  const auto spectrum = legendre(cascade_tau(q, 0.75));
  CHECK(spectrum.points.front().alpha == doctest::Approx(1.99997315897543).epsilon(1e-6));
  CHECK(spectrum.points.back().alpha == doctest::Approx(0.415064340303411).epsilon(1e-6));
  CHECK(spectrum.metrics.alpha_max == doctest::Approx(1.20751874963942).epsilon(1e-6));
  CHECK(spectrum.points[index_of(q, 1.0)].alpha == doctest::Approx(0.811278124459133).epsilon(1e-6));
  CHECK(spectrum.points[index_of(q, 0.0)].f == 1.0);
  CHECK_FALSE(spectrum.concavity_violation);
  CHECK(spectrum.alpha_monotone);
  CHECK(spectrum.f_bounded);
  CHECK(spectrum.metrics.left_width > 0.0);
  CHECK(spectrum.metrics.right_width > 0.0);
}

TEST_CASE("default grid on the closed form") {
  const auto q = default_q_grid();
  const auto spectrum = legendre(cascade_tau(q, 0.75));
  CHECK(spectrum.metrics.alpha_max == doctest::Approx(1.20751874963942).epsilon(1e-3));
  CHECK(spectrum.points[48].alpha - spectrum.points[40].alpha < 0.0);
  CHECK(spectrum.points[40].f == 1.0);
}

TEST_CASE("tau round trip through the transform") {
  const auto q = make_q_grid(-5, 5, 0.25);
  const auto tau = cascade_tau(q, 0.65);
  const auto spectrum = legendre(tau);
  for (std::size_t i = 0; i < q.size(); ++i) {
    const auto& p = spectrum.points[i];
    CHECK(p.q * p.alpha - p.f == doctest::Approx(tau.tau[i]).epsilon(1e-12));
  }
}

TEST_CASE("a constant shift of h shifts alpha") {
  const auto q = make_q_grid(-6, 6, 0.5);
  HurstSpectrum base = flat_hurst(q, 0.0);
  for (std::size_t i = 0; i < q.size(); ++i) base.h[i] = 0.6 + 0.2 * std::tanh(-0.3 * q[i]);
  HurstSpectrum shifted = base;
  for (double& h : shifted.h) h += 0.125;
  const auto a = legendre(tau_from_hurst(base));
  const auto b = legendre(tau_from_hurst(shifted));
  for (std::size_t i = 0; i < q.size(); ++i) {
    CHECK(b.points[i].alpha - a.points[i].alpha == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(b.points[i].f == doctest::Approx(a.points[i].f).epsilon(1e-11));
  }
  CHECK(b.metrics.delta_alpha == doctest::Approx(a.metrics.delta_alpha).epsilon(1e-12));
}

TEST_CASE("metrics and flags") {
  SUBCASE("without q = 0 the peak of f is used") {
    const auto q = make_q_grid(-4.5, 4.5, 1.0);
    const auto spectrum = legendre(cascade_tau(q, 0.7));
    std::size_t best = 0;
    for (std::size_t i = 1; i < q.size(); ++i) {
      if (spectrum.points[i].f > spectrum.points[best].f) best = i;
    }
    CHECK(spectrum.metrics.alpha_max == spectrum.points[best].alpha);
  }
  SUBCASE("convex tau is flagged") {
    const std::vector<double> q{-2, -1, 0, 1, 2};
    const auto tau = make_tau(Channel::Positive, q, {3.0, 0.0, -1.0, 0.0, 3.0});
    CHECK_FALSE(tau.concave);
    CHECK(tau.max_second_difference == doctest::Approx(2.0));
    const auto spectrum = legendre(tau);
    CHECK(spectrum.concavity_violation);
    CHECK_FALSE(spectrum.alpha_monotone);
  }
  SUBCASE("widths and asymmetry") {
    const auto q = make_q_grid(-10, 10, 0.25);
    const auto s = legendre(cascade_tau(q, 0.75));
    const auto& m = s.metrics;
    CHECK(m.left_width == doctest::Approx(m.alpha_max - s.points.back().alpha));
    CHECK(m.right_width == doctest::Approx(s.points.front().alpha - m.alpha_max));
    CHECK(m.delta_alpha == doctest::Approx(m.left_width + m.right_width));
    CHECK(m.asymmetry == doctest::Approx((m.right_width - m.left_width) / m.delta_alpha));
  }
}

TEST_CASE("compare_channels") {
  const auto q = make_q_grid(-3, 3, 0.5);
  auto pos = legendre(cascade_tau(q, 0.7));
  auto neg = legendre(cascade_tau(q, 0.8));
  const auto cmp = compare_channels(pos, neg);
  CHECK(cmp.delta_alpha_max == doctest::Approx(neg.metrics.alpha_max - pos.metrics.alpha_max));
  CHECK(cmp.width_difference == doctest::Approx(neg.metrics.delta_alpha - pos.metrics.delta_alpha));
  REQUIRE(cmp.alpha_difference.size() == q.size());
  CHECK(cmp.alpha_difference[0] == doctest::Approx(neg.points[0].alpha - pos.points[0].alpha));

  const auto other = legendre(cascade_tau(make_q_grid(-3, 3, 1.0), 0.8));
  CHECK(code_of([&] { compare_channels(pos, other); }) == ErrorCode::GridMismatch);
}

TEST_CASE("analyze wires the pipeline") {
  const auto series = gaussian_noise(1 << 14, 3);
  EngineConfig config;
  const auto result = analyze(series, config);
  REQUIRE(result.channels.size() == 2);
  REQUIRE(result.comparison.has_value());
  for (const auto& ch : result.channels) {
    REQUIRE(ch.spectrum.has_value());
    CHECK(ch.spectrum->points.size() == 81);
    CHECK(ch.spectrum->points[40].f == 1.0);
  }

  const auto cascade = analyze(binomial_cascade({12, 0.75, std::nullopt}), config);
  CHECK(cascade.find(Channel::Positive)->spectrum.has_value());
  CHECK_FALSE(cascade.find(Channel::Negative)->ok());
  CHECK_FALSE(cascade.comparison.has_value());
}
