#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature with helpers for
// semi-infinite ranges and log-scale integrands.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "mimonet/error.hpp"

namespace mimonet::quad {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  /// Integrand evaluations per integration axis, outermost first.
  std::vector<std::size_t> node_counts;
};

struct QuadratureOptions {
  double abs_tol = 0.0;
  double rel_tol = 1e-10;
  std::size_t max_intervals = 4000;
};

namespace detail {

inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for kronrod_nodes[1], [3], [5], [7].
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  double abs_value;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment gauss_kronrod_15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f_center = f(center);
  double kronrod = f_center * kronrod_weights[7];
  double gauss = f_center * gauss_weights[3];
  double abs_sum = std::abs(kronrod);
  std::array<double, 7> f_minus{};
  std::array<double, 7> f_plus{};
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = half * kronrod_nodes[i];
    f_minus[i] = f(center - dx);
    f_plus[i] = f(center + dx);
    const double pair = f_minus[i] + f_plus[i];
    kronrod += kronrod_weights[i] * pair;
    abs_sum += kronrod_weights[i] * (std::abs(f_minus[i]) + std::abs(f_plus[i]));
    if (i % 2 == 1) gauss += gauss_weights[i / 2] * pair;
  }
  const double mean = 0.5 * kronrod;
  double asc = kronrod_weights[7] * std::abs(f_center - mean);
  for (std::size_t i = 0; i < 7; ++i) {
    asc += kronrod_weights[i] * (std::abs(f_minus[i] - mean) + std::abs(f_plus[i] - mean));
  }
  const double value = kronrod * half;
  const double abs_value = abs_sum * std::abs(half);
  asc *= std::abs(half);
  double error = std::abs((kronrod - gauss) * half);
  if (asc != 0.0 && error != 0.0) error = asc * std::min(1.0, std::pow(200.0 * error / asc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (abs_value > std::numeric_limits<double>::min() / (50.0 * eps)) {
    error = std::max(50.0 * eps * abs_value, error);
  }
  return {a, b, value, error, abs_value};
}

}  // namespace detail

/// Integrates f over the finite interval [a, b].
template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureOptions& options = {}) {
  QuadratureResult result;
  if (a == b) {
    result.node_counts = {0};
    return result;
  }
  std::priority_queue<detail::Segment> heap;
  heap.push(detail::gauss_kronrod_15(f, a, b));
  std::size_t evaluations = 15;
  double total = heap.top().value;
  double error = heap.top().error;
  double abs_total = heap.top().abs_value;
  constexpr double eps = std::numeric_limits<double>::epsilon();

  auto tolerance = [&] {
    return std::max({options.abs_tol, options.rel_tol * std::abs(total), 50.0 * eps * abs_total});
  };

  while (error > tolerance() && heap.size() < options.max_intervals) {
    const detail::Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > std::min(worst.a, worst.b) && mid < std::max(worst.a, worst.b))) break;
    heap.pop();
    const detail::Segment left = detail::gauss_kronrod_15(f, worst.a, mid);
    const detail::Segment right = detail::gauss_kronrod_15(f, mid, worst.b);
    evaluations += 30;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    abs_total += left.abs_value + right.abs_value - worst.abs_value;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum to shed drift from the incremental updates.
  total = 0.0;
  error = 0.0;
  abs_total = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    error += heap.top().error;
    abs_total += heap.top().abs_value;
    heap.pop();
  }
  if (!std::isfinite(total) || error > tolerance()) {
    std::ostringstream msg;
    msg << "adaptive quadrature on [" << a << ", " << b << "] stalled at value " << total
        << " with error estimate " << error;
    throw Error(ErrorKind::quadrature_nonconvergence, msg.str());
  }
  result.value = total;
  result.error_estimate = error;
  result.node_counts = {evaluations};
  return result;
}

/// Integrates f over [a, inf) through x = a + t / (1 - t).
template <class F>
QuadratureResult integrate_to_infinity(F&& f, double a, const QuadratureOptions& options = {}) {
  auto mapped = [&](double t) {
    const double one_minus = 1.0 - t;
    const double x = a + t / one_minus;
    return f(x) / (one_minus * one_minus);
  };
  return integrate(mapped, 0.0, 1.0, options);
}

/// Integrates g(u) du / u over [u_lo, u_hi] in the variable ln u.
template <class F>
QuadratureResult integrate_log_scale(F&& g, double u_lo, double u_hi,
                                     const QuadratureOptions& options = {}) {
  require(u_lo > 0.0 && u_hi >= u_lo, ErrorKind::domain, "log-scale range must satisfy 0 < lo <= hi");
  auto in_log = [&](double t) { return g(std::exp(t)); };
  return integrate(in_log, std::log(u_lo), std::log(u_hi), options);
}

}  // namespace mimonet::quad
