#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "smfdfa/timeseries.hpp"

namespace smfdfa {

struct CascadeSpec {
  int levels = 16;  // series length 2^levels
  double weight = 0.75;
  // Only the sign-randomised variant draws random numbers.
  std::optional<std::uint64_t> seed;
};

struct FgnSpec {
  double hurst = 0.5;
  std::size_t length = 0;
  std::uint64_t seed = 0;
};

void validate(const CascadeSpec& spec);
void validate(const FgnSpec& spec);

// Deterministic binomial measure on 2^levels cells; every value splits into
// (v a, v (1 - a)) at each level. Timestamps are 1..n at unit spacing.
ReturnSeries binomial_cascade(const CascadeSpec& spec);

// Cascade cells multiplied by i.i.d. +-1 signs drawn from Rng(*spec.seed).
ReturnSeries sign_randomized_cascade(const CascadeSpec& spec);

// Closed-form generalized Hurst exponent of the binomial measure:
// h(q) = (1 - log2(a^q + (1-a)^q)) / q, with h(0) = -(log2 a + log2(1-a)) / 2.
double analytic_binomial_hurst(double q, double weight);

// Fractional Gaussian noise of unit variance by circulant embedding
// (Davies-Harte). Lengths are generated at the next power of two and
// truncated.
ReturnSeries fgn(const FgnSpec& spec);

// Autocovariance of unit-variance fGn at lag k.
double fgn_autocovariance(double hurst, std::size_t lag);

// i.i.d. standard normal values from Rng(seed).
ReturnSeries gaussian_noise(std::size_t length, std::uint64_t seed);

}  // namespace smfdfa
