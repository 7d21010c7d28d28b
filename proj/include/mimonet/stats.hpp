#pragma once

// Sample summaries and one-sample Kolmogorov-Smirnov machinery used by the
// simulator's distribution checks.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "mimonet/error.hpp"
#include "mimonet/special_math.hpp"

namespace mimonet::stats {

struct Summary {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double std_error = 0.0;
  std::size_t count = 0;
};

inline Summary summarize(std::span<const double> values) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.count);
  if (s.count > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.variance = sq / static_cast<double>(s.count - 1);
    s.std_error = std::sqrt(s.variance / static_cast<double>(s.count));
  }
  return s;
}

/// Regularized lower incomplete gamma P(n, x) for integer shape n >= 1.
inline double gamma_cdf_integer(int n, double x) {
  require(n >= 1, ErrorKind::domain, "gamma_cdf_integer requires n >= 1");
  if (x <= 0.0) return 0.0;
  // Q(n, x) = e^{-x} sum_{k<n} x^k / k!, accumulated in log space.
  const double log_x = std::log(x);
  double log_max = -x;
  std::vector<double> logs(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    logs[static_cast<std::size_t>(k)] = -x + k * log_x - special::log_gamma(k + 1.0);
    log_max = std::max(log_max, logs[static_cast<std::size_t>(k)]);
  }
  double acc = 0.0;
  for (double l : logs) acc += std::exp(l - log_max);
  const double upper = std::exp(log_max) * acc;
  return std::clamp(1.0 - upper, 0.0, 1.0);
}

/// Kolmogorov survival function Q_KS(t) = 2 sum (-1)^{j-1} exp(-2 j^2 t^2).
inline double kolmogorov_survival(double t) {
  if (t <= 0.0) return 1.0;
  if (t < 1.18) {
    const double y = std::exp(-std::numbers::pi * std::numbers::pi / (8.0 * t * t));
    double sum = 0.0;
    for (int j = 1; j <= 9; j += 2) sum += std::pow(y, j * j);
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / t * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * t * t);
    sum += (j % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  bool defined = false;  // false for fewer than two samples
};

/// One-sample KS test of `sample` against the continuous CDF `cdf`.
template <class Cdf>
KsResult ks_test(std::span<const double> sample, Cdf&& cdf) {
  KsResult result;
  if (sample.size() < 2) return result;
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  const double root_n = std::sqrt(n);
  result.statistic = d;
  result.p_value = kolmogorov_survival((root_n + 0.12 + 0.11 / root_n) * d);
  result.defined = true;
  return result;
}

}  // namespace mimonet::stats
