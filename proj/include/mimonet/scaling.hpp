#pragma once

// Asymptotic regime classification along N_t = c1 lambda^beta1,
// N_r = c2 lambda^beta2, and log-log slope fitting of the closed-form bounds.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mimonet/bounds.hpp"
#include "mimonet/config.hpp"
#include "mimonet/error.hpp"

namespace mimonet {

enum class BoundType { theta, omega };

inline const char* to_string(BoundType t) { return t == BoundType::theta ? "theta" : "omega"; }

struct ScalingRegime {
  double beta1 = 0.0;
  double beta2 = 0.0;
  double alpha = 4.0;
  Detector detector = Detector::zf;
  CsirMode csir = CsirMode::direct;
  /// Per-link spectral efficiency ~ lambda^{per_link_exponent} (times log lambda
  /// when log_factor); per-area adds one.
  double per_link_exponent = 0.0;
  bool log_factor = false;
  BoundType bound_type = BoundType::theta;
  /// Exponent of lambda inside log2(1 + lambda^{...}); its sign picks the case.
  double sir_exponent = 0.0;
};

namespace detail {

inline constexpr double exponent_tie = 1e-12;

}  // namespace detail

inline ScalingRegime classify(double beta1, double beta2, double alpha, Detector detector, CsirMode csir) {
  require(alpha > 2.0, ErrorKind::hypothesis_violation, "scaling laws require alpha > 2");
  require(beta1 <= beta2, ErrorKind::hypothesis_violation, "scaling laws require beta1 <= beta2");
  ScalingRegime r{beta1, beta2, alpha, detector, csir};
  if (csir == CsirMode::direct) {
    r.bound_type = BoundType::theta;
    r.sir_exponent = beta2 - beta1 - alpha / 2.0;
  } else {
    r.bound_type = BoundType::omega;
    r.sir_exponent = detector == Detector::zf_sic ? (beta2 - beta1 - 1.0) * alpha / 2.0
                                                  : (beta2 - beta1 - 1.0) * alpha / 2.0 - beta2;
  }
  // lambda^{beta1} log2(1 + lambda^e): log growth, constant, or lambda^{beta1 + e}.
  if (r.sir_exponent > detail::exponent_tie) {
    r.per_link_exponent = beta1;
    r.log_factor = true;
  } else if (r.sir_exponent < -detail::exponent_tie) {
    r.per_link_exponent = beta1 + r.sir_exponent;
  } else {
    r.per_link_exponent = beta1;
  }
  return r;
}

/// Ordinary least-squares slope of ln(value) against ln(lambda).
inline double fit_exponent(std::span<const std::pair<double, double>> curve) {
  require(curve.size() >= 4, ErrorKind::domain, "slope fit needs at least 4 points");
  double sx = 0.0;
  double sy = 0.0;
  for (const auto& [lambda, value] : curve) {
    require(lambda > 0.0 && value > 0.0, ErrorKind::nonpositive_value, "slope fit needs positive lambda and value");
    sx += std::log(lambda);
    sy += std::log(value);
  }
  const double n = static_cast<double>(curve.size());
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [lambda, value] : curve) {
    const double dx = std::log(lambda) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(value) - my);
  }
  require(sxx > 0.0, ErrorKind::domain, "slope fit needs distinct lambda values");
  return sxy / sxx;
}

/// N_t = c1 lambda^beta1, N_r = c2 lambda^beta2, L = N_r / N_t - 1 (local CSIR).
struct Trajectory {
  double beta1 = 0.0;
  double beta2 = 0.0;
  double c1 = 1.0;
  double c2 = 8.0;
  double alpha = 4.0;
  double r_d = 50.0;
  double epsilon = default_epsilon;

  BoundInputs at(double lambda) const {
    BoundInputs in;
    in.lambda = lambda;
    in.alpha = alpha;
    in.r_d = r_d;
    in.n_t = c1 * std::pow(lambda, beta1);
    in.n_r = c2 * std::pow(lambda, beta2);
    in.l = in.n_r / in.n_t - 1.0;
    in.epsilon = epsilon;
    return in;
  }
};

enum class BoundSide { lower, upper };

/// Per-area bound along the trajectory. Local CSIR only has a lower bound.
inline double bound_along(const Trajectory& t, double lambda, Detector detector, CsirMode csir, BoundSide side) {
  const BoundInputs in = t.at(lambda);
  if (csir == CsirMode::local) {
    require(side == BoundSide::lower, ErrorKind::domain, "local CSIR has no closed-form upper bound");
    return lcsir_lower_bound(in, detector);
  }
  return side == BoundSide::lower ? dcsir_lower_bound(in, detector) : dcsir_upper_bound(in, detector);
}

/// Largest per-stream argument x in the bound's log2(1 + x) terms.
inline double peak_sir(const BoundInputs& in, Detector detector, CsirMode csir, BoundSide side) {
  const bool zf = detector == Detector::zf;
  if (csir == CsirMode::local) {
    require(side == BoundSide::lower, ErrorKind::domain, "local CSIR has no closed-form upper bound");
    const double dof = zf ? std::max(detail::local_spare_dof(in) + in.epsilon, 0.0) : in.n_r - 1.0 + in.epsilon;
    return detail::lcsir_lower_coefficient(in) * dof;
  }
  if (side == BoundSide::lower) {
    return detail::dcsir_lower_coefficient(in) * (zf ? in.n_r - in.n_t + in.epsilon : in.n_r - 1.0 + in.epsilon);
  }
  return detail::dcsir_upper_coefficient(in) * (zf ? in.n_r - in.n_t + 1.0 : in.n_r);
}

/// log10 of the largest lambda where peak_sir crosses 1 along the trajectory,
/// searched over [1e-30, 1e80] where the trajectory is admissible. Empty when
/// the SIR never crosses 1 there (the tie case, where it tends to a constant).
inline std::optional<double> knee_log10(const Trajectory& t, Detector detector, CsirMode csir, BoundSide side) {
  auto level = [&](double x) -> std::optional<double> {
    try {
      const BoundInputs in = t.at(std::pow(10.0, x));
      if (!std::isfinite(in.n_r) || in.n_r < in.n_t) return std::nullopt;
      const double v = std::log(peak_sir(in, detector, csir, side));
      if (!std::isfinite(v)) return std::nullopt;
      return v;
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  constexpr double step = 0.25;
  std::optional<std::pair<double, double>> bracket;
  std::optional<std::pair<double, double>> prev;
  for (double x = -30.0; x <= 80.0; x += step) {
    const auto v = level(x);
    if (!v) {
      prev.reset();
      continue;
    }
    if (prev && ((prev->second < 0.0) != (*v < 0.0))) bracket = std::pair{prev->first, x};
    prev = std::pair{x, *v};
  }
  if (!bracket) return std::nullopt;
  auto [lo, hi] = *bracket;
  const bool rising = *level(lo) < 0.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    const auto v = level(mid);
    if (!v) break;
    if ((*v < 0.0) == rising) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

struct SlopeFit {
  double fitted = 0.0;
  double expected = 0.0;  // per-area exponent
  bool log_factor = false;
  std::optional<double> knee_log10;
  double fit_lo_log10 = 0.0;
  double fit_hi_log10 = 0.0;
  std::vector<std::pair<double, double>> curve;  // (lambda, per-area bound)
};

/// Fits the per-area slope of a bound over the top `fit_decades` of
/// [10^log10_lo, 10^log10_hi]. In log-growth regimes the curve is divided by
/// ln(lambda / lambda_knee) before fitting so the fitted slope is the
/// power-law part; the fit window must then lie past the knee.
inline SlopeFit fit_bound_slope(const Trajectory& t, Detector detector, CsirMode csir, BoundSide side,
                                double log10_lo, double log10_hi, int points_per_decade = 8,
                                double fit_decades = 2.0) {
  const ScalingRegime regime = classify(t.beta1, t.beta2, t.alpha, detector, csir);
  require(log10_hi > log10_lo && points_per_decade > 0, ErrorKind::domain, "slope fit needs a nonempty range");
  SlopeFit out;
  out.expected = regime.per_link_exponent + 1.0;
  out.log_factor = regime.log_factor;
  out.knee_log10 = knee_log10(t, detector, csir, side);
  out.fit_hi_log10 = log10_hi;
  out.fit_lo_log10 = std::max(log10_lo, log10_hi - fit_decades);
  double log_knee = 0.0;
  if (regime.log_factor) {
    require(out.knee_log10.has_value() && *out.knee_log10 < out.fit_lo_log10, ErrorKind::domain,
            "log-growth slope fit needs its window past the regime knee");
    log_knee = *out.knee_log10 * std::numbers::ln10;
  }
  const int n = static_cast<int>(std::round((log10_hi - log10_lo) * points_per_decade));
  std::vector<std::pair<double, double>> fit_points;
  for (int i = 0; i <= n; ++i) {
    const double e = log10_lo + (log10_hi - log10_lo) * i / n;
    const double lambda = std::pow(10.0, e);
    const double value = bound_along(t, lambda, detector, csir, side);
    out.curve.emplace_back(lambda, value);
    if (e >= log10_hi - fit_decades - 1e-9) {
      fit_points.emplace_back(lambda, regime.log_factor ? value / (std::log(lambda) - log_knee) : value);
    }
  }
  out.fitted = fit_exponent(fit_points);
  return out;
}

/// fit_bound_slope over [knee, knee + decades_past_knee + fit_decades], so the
/// fit window starts decades_past_knee decades beyond the knee. Without a knee
/// the range starts at 10^fallback_lo.
inline SlopeFit fit_bound_slope_past_knee(const Trajectory& t, Detector detector, CsirMode csir, BoundSide side,
                                          double decades_past_knee = 4.0, double fit_decades = 2.0,
                                          double fallback_lo = 6.0) {
  const double lo = knee_log10(t, detector, csir, side).value_or(fallback_lo);
  return fit_bound_slope(t, detector, csir, side, lo, lo + decades_past_knee + fit_decades, 8, fit_decades);
}

}  // namespace mimonet
