#include "smfdfa/synth.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "smfdfa/error.hpp"
#include "smfdfa/random.hpp"

namespace smfdfa {

namespace {

// FFTW's planner is not thread-safe; execution of a finished plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

ComplexBuffer allocate(std::size_t n) {
  auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (p == nullptr) throw Error(ErrorCode::Internal, "fftw_malloc failed");
  return ComplexBuffer(p);
}

// In-place forward DFT, X_k = sum_j x_j exp(-2 pi i jk / n).
void forward_fft(fftw_complex* data, std::size_t n) {
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), data, data, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw Error(ErrorCode::Internal, "fftw planning failed");
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

ReturnSeries with_unit_timestamps(std::vector<double> values) {
  std::vector<Timestamp> starts(values.size());
  std::vector<Timestamp> ends(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    starts[i] = static_cast<double>(i);
    ends[i] = static_cast<double>(i + 1);
  }
  return ReturnSeries(std::move(values), std::move(starts), std::move(ends));
}

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Eigenvalues of the circulant embedding of size m; empty when negative
// beyond tolerance.
std::vector<double> embedding_spectrum(double hurst, std::size_t m) {
  auto buffer = allocate(m);
  for (std::size_t j = 0; j < m; ++j) {
    buffer[j][0] = fgn_autocovariance(hurst, std::min(j, m - j));
    buffer[j][1] = 0.0;
  }
  forward_fft(buffer.get(), m);
  std::vector<double> lambda(m);
  double largest = 0.0;
  for (std::size_t k = 0; k < m; ++k) largest = std::max(largest, std::abs(buffer[k][0]));
  for (std::size_t k = 0; k < m; ++k) {
    const double v = buffer[k][0];
    if (v < -1e-10 * largest) return {};
    lambda[k] = std::max(v, 0.0);
  }
  return lambda;
}

}  // namespace

void validate(const CascadeSpec& spec) {
  if (spec.levels < 1 || spec.levels > 26) {
    throw Error(ErrorCode::InvalidArgument, "cascade levels must be in [1, 26]");
  }
  if (!(spec.weight > 0.5 && spec.weight < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "cascade weight a must satisfy 0.5 < a < 1");
  }
}

void validate(const FgnSpec& spec) {
  if (!(spec.hurst > 0.0 && spec.hurst < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "Hurst exponent must satisfy 0 < H < 1");
  }
  if (spec.length == 0) throw Error(ErrorCode::InvalidArgument, "fGn length must be positive");
  if (spec.length > (std::size_t{1} << 28)) throw Error(ErrorCode::InvalidArgument, "fGn length too large");
}

ReturnSeries binomial_cascade(const CascadeSpec& spec) {
  validate(spec);
  const double a = spec.weight;
  const double b = 1.0 - a;
  std::vector<double> level{1.0};
  for (int k = 0; k < spec.levels; ++k) {
    std::vector<double> next(level.size() * 2);
    for (std::size_t i = 0; i < level.size(); ++i) {
      next[2 * i] = level[i] * a;
      next[2 * i + 1] = level[i] * b;
    }
    level = std::move(next);
  }
  return with_unit_timestamps(std::move(level));
}

ReturnSeries sign_randomized_cascade(const CascadeSpec& spec) {
  if (!spec.seed) throw Error(ErrorCode::InvalidArgument, "sign-randomised cascade needs a seed");
  ReturnSeries cascade = binomial_cascade(spec);
  std::vector<double> values(cascade.values().begin(), cascade.values().end());
  Rng rng(*spec.seed);
  for (double& v : values) v *= rng.sign();
  return with_unit_timestamps(std::move(values));
}

double analytic_binomial_hurst(double q, double weight) {
  if (!(weight > 0.5 && weight < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "cascade weight a must satisfy 0.5 < a < 1");
  }
  const double la = std::log2(weight);
  const double lb = std::log2(1.0 - weight);
  if (std::abs(q) < 1e-6) {
    // Second-order expansion about q = 0 of the expression below.
    const double mean = 0.5 * (la + lb);
    const double var = 0.25 * (la - lb) * (la - lb);
    return -mean - 0.5 * q * std::log(2.0) * var;
  }
  // log2(a^q + b^q) = q log2 a + log2(1 + (b/a)^q), stable for large |q|.
  const double big = q > 0.0 ? la : lb;
  const double small = q > 0.0 ? lb : la;
  const double log_sum = q * big + std::log1p(std::exp2(q * (small - big))) / std::log(2.0);
  return (1.0 - log_sum) / q;
}

double fgn_autocovariance(double hurst, std::size_t lag) {
  const double k = static_cast<double>(lag);
  const double e = 2.0 * hurst;
  return 0.5 * (std::pow(k + 1.0, e) - 2.0 * std::pow(k, e) + std::pow(std::abs(k - 1.0), e));
}

ReturnSeries fgn(const FgnSpec& spec) {
  validate(spec);
  const std::size_t n = next_power_of_two(spec.length);
  std::size_t m = 2 * n;
  std::vector<double> lambda = embedding_spectrum(spec.hurst, m);
  if (lambda.empty()) {
    m *= 2;
    lambda = embedding_spectrum(spec.hurst, m);
  }
  if (lambda.empty()) {
    throw Error(ErrorCode::EmbeddingNotPositive, "circulant embedding has negative eigenvalues");
  }
  Rng rng(spec.seed);
  auto w = allocate(m);
  const double md = static_cast<double>(m);
  const std::size_t half = m / 2;
  w[0][0] = std::sqrt(lambda[0] / md) * rng.normal();
  w[0][1] = 0.0;
  w[half][0] = std::sqrt(lambda[half] / md) * rng.normal();
  w[half][1] = 0.0;
  for (std::size_t k = 1; k < half; ++k) {
    const double scale = std::sqrt(lambda[k] / (2.0 * md));
    const double re = scale * rng.normal();
    const double im = scale * rng.normal();
    w[k][0] = re;
    w[k][1] = im;
    w[m - k][0] = re;
    w[m - k][1] = -im;
  }
  forward_fft(w.get(), m);
  std::vector<double> values(spec.length);
  for (std::size_t i = 0; i < spec.length; ++i) values[i] = w[i][0];
  return with_unit_timestamps(std::move(values));
}

ReturnSeries gaussian_noise(std::size_t length, std::uint64_t seed) {
  if (length == 0) throw Error(ErrorCode::InvalidArgument, "length must be positive");
  Rng rng(seed);
  std::vector<double> values(length);
  for (double& v : values) v = rng.normal();
  return with_unit_timestamps(std::move(values));
}

}  // namespace smfdfa
