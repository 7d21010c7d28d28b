#pragma once

// Closed-form lower/upper bounds on the interference-limited sum spectral
// efficiency per unit area, and the optimal density / stream count read off
// them in the high-SIR regime.
//
// Inputs are real-valued so the same code traces scaling trajectories
// N_t = c1 lambda^beta1, N_r = c2 lambda^beta2. Stream sums over m = 1..N_t use
// round(N_t) terms, kept in floating point since N_t can pass 2^63.

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mimonet/config.hpp"
#include "mimonet/error.hpp"
#include "mimonet/special_math.hpp"

namespace mimonet {

inline constexpr double default_epsilon = 0.4;

struct BoundPair {
  double lower = 0.0;
  double upper = 0.0;
  double epsilon = default_epsilon;
};

struct BoundInputs {
  double lambda = 1e-5;
  double alpha = 4.0;
  double r_d = 50.0;
  double n_t = 1.0;
  double n_r = 4.0;
  double l = 0.0;
  double epsilon = default_epsilon;

  static BoundInputs from_config(const SystemConfig& config, double epsilon = default_epsilon) {
    BoundInputs in;
    in.lambda = config.lambda;
    in.alpha = config.alpha;
    in.r_d = config.r_d;
    in.n_t = config.require_fixed_n_t("closed-form bounds");
    in.n_r = config.n_r;
    in.l = config.effective_l();
    in.epsilon = epsilon;
    return in;
  }
};

/// E[d^{-alpha}] under the ring law on [1, R_d].
inline double mean_inverse_link_gain(double alpha, double r_d) {
  return 2.0 * (1.0 - std::pow(r_d, 2.0 - alpha)) / ((alpha - 2.0) * (r_d * r_d - 1.0));
}

/// E[d^{alpha}] under the ring law on [1, R_d].
inline double mean_link_loss(double alpha, double r_d) {
  return 2.0 * (std::pow(r_d, alpha + 2.0) - 1.0) / ((alpha + 2.0) * (r_d * r_d - 1.0));
}

/// ln K' with K' = Gamma(n_t + 2/alpha) Gamma(1 - 2/alpha) / Gamma(n_t).
inline double log_interference_constant(double n_t, double alpha) {
  const double delta = 2.0 / alpha;
  return special::log_gamma_ratio(n_t, delta) + special::log_gamma(1.0 - delta);
}

namespace detail {

inline constexpr long long direct_sum_terms = 2000;

// (1 + d) log1p(d) - d, with its series where the closed form cancels.
inline double entropy_kernel(double d) {
  if (std::abs(d) < 1e-3) {
    return d * d * (0.5 - d * (1.0 / 6.0 - d * (1.0 / 12.0 - d / 20.0)));
  }
  return (1.0 + d) * std::log1p(d) - d;
}

inline double stream_count(double n_t) { return std::max(1.0, std::round(n_t)); }

inline double dcsir_lower_coefficient(const BoundInputs& in) {
  const double half_alpha = in.alpha / 2.0;
  return std::exp(half_alpha * (std::log(2.0) - log_interference_constant(in.n_t, in.alpha) -
                                std::log(in.lambda * std::numbers::pi * (in.r_d * in.r_d + 1.0))));
}

inline double dcsir_upper_coefficient(const BoundInputs& in) {
  const double half_alpha = in.alpha / 2.0;
  return std::exp(std::log(mean_inverse_link_gain(in.alpha, in.r_d)) + special::log_gamma(1.0 + half_alpha) -
                  half_alpha * (std::log(in.lambda * std::numbers::pi) + log_interference_constant(in.n_t, in.alpha)));
}

// N_r - (L + 1) N_t, snapped to zero when it is roundoff (trajectories set
// L = N_r / N_t - 1 with N_r far beyond 2^53).
inline double local_spare_dof(const BoundInputs& in) {
  const double spare = in.n_r - (in.l + 1.0) * in.n_t;
  return std::abs(spare) <= 1e-12 * in.n_r ? 0.0 : spare;
}

inline double lcsir_lower_coefficient(const BoundInputs& in) {
  const double half_alpha = in.alpha / 2.0;
  require(in.l > half_alpha, ErrorKind::invalid_l, "local-CSIR lower bound requires L > alpha/2");
  return std::exp((half_alpha - 1.0) * std::log(in.l - half_alpha) - std::log(mean_link_loss(in.alpha, in.r_d)) -
                  std::log(2.0 * in.n_t / (in.alpha - 2.0)) - half_alpha * std::log(std::numbers::pi * in.lambda));
}

}  // namespace detail

/// sum_{m=1}^{count} log2(1 + a (k + m)) for a whole count, requires a >= 0 and
/// k + 1 >= 0. Past the first couple of thousand terms the remainder is handled
/// with the Euler-Maclaurin formula.
inline double log2_stream_sum(double a, double k, double count) {
  require(a >= 0.0 && k + 1.0 >= 0.0, ErrorKind::domain, "stream sum needs a >= 0 and k >= -1");
  require(count >= 0.0 && count == std::floor(count), ErrorKind::domain, "stream count must be a whole number");
  auto term = [&](double m) { return std::log1p(a * (k + m)); };
  double total = 0.0;
  const long long head = static_cast<long long>(std::min(count, static_cast<double>(detail::direct_sum_terms)));
  for (long long m = 1; m <= head; ++m) total += term(static_cast<double>(m));
  if (count > static_cast<double>(head) && a > 0.0) {
    const double m0 = static_cast<double>(head + 1);
    const double m1 = count;
    // int_{m0}^{m1} ln(1 + a(k+m)) dm with y0 = 1 + a(k+m0), delta = a(m1-m0)/y0:
    //   (m1 - m0) ln y0 + (y0 / a) [(1 + delta) ln(1 + delta) - delta]
    const double y0 = 1.0 + a * (k + m0);
    const double delta = a * (m1 - m0) / y0;
    const double integral = (m1 - m0) * std::log1p(a * (k + m0)) + y0 / a * detail::entropy_kernel(delta);
    auto derivative = [&](double m) { return a / (1.0 + a * (k + m)); };
    total += integral + 0.5 * (term(m0) + term(m1)) + (derivative(m1) - derivative(m0)) / 12.0;
  }
  return total / std::numbers::ln2;
}

/// Jensen-type lower bound with E[d^2] = (R_d^2 + 1)/2 and e^{psi(n)} > n - 1 + epsilon.
inline double dcsir_lower_bound(const BoundInputs& in, Detector detector) {
  const double a = detail::dcsir_lower_coefficient(in);
  if (detector == Detector::zf) {
    return 2.0 * in.lambda * in.n_t / in.alpha * std::log1p(a * (in.n_r - in.n_t + in.epsilon)) / std::numbers::ln2;
  }
  return 2.0 * in.lambda / in.alpha *
         log2_stream_sum(a, in.n_r - in.n_t - 1.0 + in.epsilon, detail::stream_count(in.n_t));
}

/// log2(1 + E[X] E[1/Y]) upper bound with E[1/I] = Gamma(1 + alpha/2) / (lambda pi K')^{alpha/2}.
inline double dcsir_upper_bound(const BoundInputs& in, Detector detector) {
  const double b = detail::dcsir_upper_coefficient(in);
  if (detector == Detector::zf) {
    return in.lambda * in.n_t * std::log1p(b * (in.n_r - in.n_t + 1.0)) / std::numbers::ln2;
  }
  return in.lambda * log2_stream_sum(b, in.n_r - in.n_t, detail::stream_count(in.n_t));
}

/// Local-CSIR lower bound, needs L > alpha/2:
/// E[I~] = (2 n_t / (alpha - 2)) (pi lambda)^{alpha/2} Gamma(L + 1 - alpha/2) / Gamma(L)
/// with Gamma(L) / Gamma(L + 1 - alpha/2) >= (L - alpha/2)^{alpha/2 - 1}, over E[d^alpha].
inline double lcsir_lower_bound(const BoundInputs& in, Detector detector) {
  const double d = detail::lcsir_lower_coefficient(in);
  if (detector == Detector::zf) {
    const double dof = detail::local_spare_dof(in) + in.epsilon;
    return in.lambda * in.n_t * std::log1p(std::max(dof, 0.0) * d) / std::numbers::ln2;
  }
  return in.lambda * log2_stream_sum(d, in.n_r - in.n_t - 1.0 + in.epsilon, detail::stream_count(in.n_t));
}

inline BoundPair bounds_dcsir(const SystemConfig& config, Detector detector, double epsilon = default_epsilon) {
  config.validate();
  require(config.csir == CsirMode::direct, ErrorKind::invalid_config, "direct-CSIR bounds need csir=direct");
  const BoundInputs in = BoundInputs::from_config(config, epsilon);
  return {dcsir_lower_bound(in, detector), dcsir_upper_bound(in, detector), epsilon};
}

inline double lower_bound_lcsir(const SystemConfig& config, Detector detector, int l,
                                double epsilon = default_epsilon) {
  BoundInputs in = BoundInputs::from_config(config, epsilon);
  require(l >= 1 && l <= config.n_r / static_cast<int>(in.n_t) - 1, ErrorKind::invalid_l,
          "local CSIR requires 1 <= L <= floor(n_r / n_t) - 1");
  in.l = l;
  return lcsir_lower_bound(in, detector);
}

// ---------------------------------------------------------------------------

enum class DensityForm {
  printed,     // the published high-SIR formulas
  stationary,  // exact maximizer of lambda log(B lambda^{-alpha/2}) for the bounds above
};

struct OptimalDensity {
  double lambda_star = 0.0;
  double aloha_probability = 1.0;
};

namespace detail {

// (prod_{m=1}^{n_t} (n_r - n_t + m - 1))^{1/n_t}; zero when n_r = n_t.
inline double geometric_mean_dof(int n_t, int n_r) {
  double log_sum = 0.0;
  for (int m = 1; m <= n_t; ++m) {
    const double f = n_r - n_t + m - 1.0;
    if (f <= 0.0) return 0.0;
    log_sum += std::log(f);
  }
  return std::exp(log_sum / n_t);
}

}  // namespace detail

inline OptimalDensity optimal_density(const SystemConfig& config, Detector detector, CsirMode csir,
                                      DensityForm form = DensityForm::printed) {
  const int n_t = config.require_fixed_n_t("optimal density");
  const double alpha = config.alpha;
  const double half_alpha = alpha / 2.0;
  const double r_d = config.r_d;
  const double k_prime = std::exp(log_interference_constant(n_t, alpha));
  double dof = detector == Detector::zf ? static_cast<double>(config.n_r - n_t)
                                        : detail::geometric_mean_dof(n_t, config.n_r);
  double lambda_star = 0.0;
  if (csir == CsirMode::direct) {
    const double base = std::pow(dof, 2.0 / alpha) / (k_prime * std::numbers::pi * (r_d * r_d + 1.0));
    lambda_star = form == DensityForm::printed ? base / std::pow(2.0, std::numbers::ln2 - 1.0)
                                               : 2.0 * base / std::numbers::e;
  } else {
    const int l = config.l_cancel;
    require(l > half_alpha, ErrorKind::invalid_l, "local-CSIR optimal density requires L > alpha/2");
    if (detector == Detector::zf) dof = config.n_r - (l + 1.0) * n_t;
    const double slack = std::pow(l - half_alpha, half_alpha - 1.0);
    if (form == DensityForm::printed) {
      const double denom = mean_inverse_link_gain(alpha, r_d) * std::pow(2.0 * std::numbers::pi, half_alpha) * n_t;
      lambda_star = std::pow(dof * slack / denom, 2.0 / alpha) / std::pow(2.0, std::numbers::ln2);
    } else {
      const double denom = mean_link_loss(alpha, r_d) * 2.0 * n_t / (alpha - 2.0) * std::pow(std::numbers::pi, half_alpha);
      lambda_star = std::pow(dof * slack / denom, 2.0 / alpha) / std::numbers::e;
    }
  }
  return {lambda_star, std::min(1.0, lambda_star / config.lambda)};
}

/// N_t* = b N_r / e with b = (2 / Gamma(1 - 2/alpha))^{alpha/2} / (lambda pi R_d^2)^{alpha/2},
/// continuous; the caller rounds and clamps to [1, N_r].
inline double optimal_stream_count(const SystemConfig& config) {
  const double half_alpha = config.alpha / 2.0;
  const double b = std::pow(2.0 / special::gamma(1.0 - 2.0 / config.alpha), half_alpha) /
                   std::pow(config.lambda * std::numbers::pi * config.r_d * config.r_d, half_alpha);
  return b * config.n_r / std::numbers::e;
}

}  // namespace mimonet
