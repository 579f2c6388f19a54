#pragma once

// Straight-line reference for the sign-separated fluctuation function:
// explicit index loops, normal equations solved by Gaussian elimination in
// long double, direct powers. Shares no code with the library.

#include <cmath>
#include <cstddef>
#include <vector>

namespace naive {

inline long double poly_residual_ss(const std::vector<long double>& y, int order) {
  const int n = static_cast<int>(y.size());
  const int m = order + 1;
  std::vector<std::vector<long double>> a(m, std::vector<long double>(m + 1, 0.0L));
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) {
      for (int k = 1; k <= n; ++k) a[r][c] += std::pow(static_cast<long double>(k), r + c);
    }
    for (int k = 1; k <= n; ++k) a[r][m] += std::pow(static_cast<long double>(k), r) * y[k - 1];
  }
  for (int col = 0; col < m; ++col) {
    int pivot = col;
    for (int r = col + 1; r < m; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    }
    std::swap(a[col], a[pivot]);
    for (int r = 0; r < m; ++r) {
      if (r == col) continue;
      const long double factor = a[r][col] / a[col][col];
      for (int c = col; c <= m; ++c) a[r][c] -= factor * a[col][c];
    }
  }
  long double ss = 0.0L;
  for (int k = 1; k <= n; ++k) {
    long double fit = 0.0L;
    for (int j = 0; j < m; ++j) fit += a[j][m] / a[j][j] * std::pow(static_cast<long double>(k), j);
    ss += (y[k - 1] - fit) * (y[k - 1] - fit);
  }
  return ss;
}

// F^2(v, s) for every segment (forward then backward) whose sign subset has
// at least order + 2 points. sign = +1 or -1.
inline std::vector<double> signed_variances(const std::vector<double>& g, std::size_t s, int order, int sign) {
  std::vector<double> out;
  const std::size_t n = g.size();
  const std::size_t count = n / s;
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t v = 0; v < count; ++v) {
      const std::size_t begin = pass == 0 ? v * s : n - (v + 1) * s;
      std::vector<long double> profile;
      long double running = 0.0L;
      for (std::size_t i = begin; i < begin + s; ++i) {
        if ((sign > 0 && g[i] > 0.0) || (sign < 0 && g[i] < 0.0)) {
          running += g[i];
          profile.push_back(running);
        }
      }
      if (profile.size() < static_cast<std::size_t>(order) + 2) continue;
      out.push_back(static_cast<double>(poly_residual_ss(profile, order) / static_cast<long double>(s)));
    }
  }
  return out;
}

inline double fluctuation(const std::vector<double>& variances, double q) {
  long double acc = 0.0L;
  std::size_t k = 0;
  for (double f2 : variances) {
    if (f2 <= 0.0) continue;
    acc += q == 0.0 ? std::log(static_cast<long double>(f2))
                    : std::pow(static_cast<long double>(f2), static_cast<long double>(q) / 2.0L);
    ++k;
  }
  if (q == 0.0) return static_cast<double>(std::exp(acc / (2.0L * k)));
  return static_cast<double>(std::pow(acc / k, 1.0L / static_cast<long double>(q)));
}

}  // namespace naive
