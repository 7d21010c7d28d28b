#pragma once

// Quadrature evaluation of the exact sum spectral efficiency per unit area:
// direct CSIR (general antenna distribution), its fixed-distance single-integral
// and alpha = 4 closed forms, local CSIR with L cancelled interferers, and the
// log-expectation identity the derivations rest on.
//
// All u-type integrals carry the weight e^{-u}/u and are done in the variable
// ln u, where the 1/u endpoint turns into an exponentially decaying tail.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "mimonet/config.hpp"
#include "mimonet/error.hpp"
#include "mimonet/quadrature.hpp"
#include "mimonet/special_math.hpp"

namespace mimonet {

using quad::QuadratureResult;

struct AnalyticOptions {
  /// Reproduce the displayed theorem forms: r^alpha in the direct-CSIR noise
  /// exponent and the 2x/R_d^2 distance kernel in the local-CSIR theorems.
  bool verbatim_theorem = false;
  /// Replace the ring distance law with a point mass at this distance.
  std::optional<double> fixed_link_distance;
  double rel_tol = 1e-9;
};

namespace detail {

inline constexpr double u_upper = 42.0;  // e^{-42} < 6e-19
inline constexpr double negligible = 1e-16;

/// 1 - (1 + z)^{-n}
inline double stream_bracket(double z, double n) { return -std::expm1(-n * std::log1p(z)); }

inline quad::QuadratureOptions inner_options(double rel_tol) {
  quad::QuadratureOptions o;
  o.rel_tol = rel_tol * 1e-2;
  return o;
}

inline quad::QuadratureOptions outer_options(double rel_tol) {
  quad::QuadratureOptions o;
  o.rel_tol = rel_tol;
  return o;
}

/// Averages f over the typical-link distance law.
struct LinkDistanceLaw {
  enum class Kind { ring, ring_unnormalized, point } kind = Kind::ring;
  double r_d = 50.0;
  double d = 1.0;

  template <class F>
  QuadratureResult average(F&& f, double rel_tol) const {
    if (kind == Kind::point) {
      QuadratureResult r;
      r.value = f(d);
      r.node_counts = {1};
      return r;
    }
    const double norm = kind == Kind::ring ? r_d * r_d - 1.0 : r_d * r_d;
    auto weighted = [&](double r) { return f(r) * 2.0 * r / norm; };
    return quad::integrate(weighted, 1.0, r_d, outer_options(rel_tol));
  }
};

inline LinkDistanceLaw dcsir_distance_law(const SystemConfig& config, const AnalyticOptions& options) {
  if (options.fixed_link_distance) return {LinkDistanceLaw::Kind::point, config.r_d, *options.fixed_link_distance};
  return {LinkDistanceLaw::Kind::ring, config.r_d, 1.0};
}

inline LinkDistanceLaw lcsir_distance_law(const SystemConfig& config, const AnalyticOptions& options) {
  if (options.fixed_link_distance) return {LinkDistanceLaw::Kind::point, config.r_d, *options.fixed_link_distance};
  return {options.verbatim_theorem ? LinkDistanceLaw::Kind::ring_unnormalized : LinkDistanceLaw::Kind::ring,
          config.r_d, 1.0};
}

struct StreamTerm {
  double weight;  // multiplies the bracket
  double n;       // Gamma shape of the stream's signal fading
};

// Streams of a typical transmitter with v antennas.
inline std::vector<StreamTerm> stream_terms(Detector detector, int n_r, int v) {
  std::vector<StreamTerm> terms;
  if (detector == Detector::zf) {
    terms.push_back({static_cast<double>(v), static_cast<double>(n_r - v + 1)});
  } else {
    for (int m = 1; m <= v; ++m) terms.push_back({1.0, static_cast<double>(n_r - v + m)});
  }
  return terms;
}

}  // namespace detail

/// K = sum_k p_k Gamma(k + 2/alpha) Gamma(1 - 2/alpha) / Gamma(k).
inline double interference_constant(const SystemConfig& config) {
  const double delta = 2.0 / config.alpha;
  double k_sum = 0.0;
  for (std::size_t k = 0; k < config.antenna_dist.size(); ++k) {
    if (config.antenna_dist[k] == 0.0) continue;
    k_sum += config.antenna_dist[k] * special::gamma_ratio(static_cast<double>(k + 1), delta);
  }
  return k_sum * special::gamma(1.0 - delta);
}

/// E[exp(-s I)] for the interference of the whole PPP (no cancellation).
inline double laplace_interference_dcsir(double s, const SystemConfig& config) {
  require(s >= 0.0, ErrorKind::domain, "Laplace argument must be non-negative");
  require(config.alpha > 2.0, ErrorKind::domain, "alpha must exceed 2");
  if (s == 0.0) return 1.0;
  return std::exp(-std::numbers::pi * config.lambda * std::pow(s, 2.0 / config.alpha) *
                  interference_constant(config));
}

/// Direct-CSIR sum spectral efficiency per unit area, bits/s/Hz/m^2.
inline QuadratureResult sum_se_dcsir(const SystemConfig& config, Detector detector,
                                     const AnalyticOptions& options = {}) {
  config.validate();
  require(config.csir == CsirMode::direct, ErrorKind::invalid_config, "direct-CSIR formula needs csir=direct");
  const double alpha = config.alpha;
  const double half_alpha = alpha / 2.0;
  const double k_const = interference_constant(config);
  const double lpk = config.lambda * std::numbers::pi * k_const;
  const double noise = config.noise_to_power();

  struct Group {
    double p;
    double noise_coef;  // multiplies (u / (lambda pi K))^{alpha/2}
    std::vector<detail::StreamTerm> terms;
  };
  std::vector<Group> groups;
  for (int v = 1; v <= config.n_r; ++v) {
    const double p = config.antenna_dist[static_cast<std::size_t>(v - 1)];
    if (p == 0.0) continue;
    groups.push_back({p, v * noise, detail::stream_terms(detector, config.n_r, v)});
  }

  std::size_t inner_evals = 0;
  double inner_error = 0.0;
  auto per_link_nats = [&](double r) {
    const double u_c = lpk * r * r;
    const double noise_scale = options.verbatim_theorem ? std::pow(r, alpha) : 1.0;
    auto integrand = [&](double u) {
      const double z = std::pow(u / u_c, half_alpha);
      const double noise_arg = std::pow(u / lpk, half_alpha) * noise_scale;
      double acc = 0.0;
      for (const auto& g : groups) {
        double streams = 0.0;
        for (const auto& t : g.terms) streams += t.weight * detail::stream_bracket(z, t.n);
        acc += g.p * std::exp(-g.noise_coef * noise_arg) * streams;
      }
      return std::exp(-u) * acc;
    };
    const double u_lo = std::min(u_c, 1.0) * std::pow(detail::negligible, 1.0 / half_alpha);
    const auto inner = quad::integrate_log_scale(integrand, u_lo, detail::u_upper,
                                                 detail::inner_options(options.rel_tol));
    inner_evals += inner.node_counts.front();
    inner_error = std::max(inner_error, inner.error_estimate / std::max(std::abs(inner.value), 1e-300));
    return half_alpha * inner.value;
  };

  const auto outer = detail::dcsir_distance_law(config, options).average(per_link_nats, options.rel_tol);
  const double scale = config.lambda / std::numbers::ln2;
  QuadratureResult result;
  result.value = scale * outer.value;
  result.error_estimate = scale * outer.error_estimate + std::abs(result.value) * inner_error;
  result.node_counts = {outer.node_counts.front(), inner_evals};
  return result;
}

inline QuadratureResult sum_se_zf_dcsir(const SystemConfig& config, const AnalyticOptions& options = {}) {
  return sum_se_dcsir(config, Detector::zf, options);
}

inline QuadratureResult sum_se_sic_dcsir(const SystemConfig& config, const AnalyticOptions& options = {}) {
  return sum_se_dcsir(config, Detector::zf_sic, options);
}

/// Interference-limited, every link of length d, every transmitter with n_t
/// antennas: the single u-integral with the bracket expanded binomially,
///   1 - (1+y)^{-M} = sum_{n=1}^{M} C(M, n) y^n / (1+y)^M,
/// and one integral per n.
inline QuadratureResult sum_se_fixed_distance(const SystemConfig& config, double d, Detector detector,
                                              const AnalyticOptions& options = {}) {
  config.validate();
  require(config.noise_to_power() == 0.0, ErrorKind::invalid_config,
          "fixed-distance form is interference-limited; set interference_limited");
  require(d > 0.0, ErrorKind::domain, "link distance must be positive");
  const int n_t = config.require_fixed_n_t("fixed-distance form");
  const double half_alpha = config.alpha / 2.0;
  const double c = config.lambda * std::numbers::pi * d * d * interference_constant(config);
  const double u_lo = std::min(c, 1.0) * std::pow(detail::negligible, 1.0 / half_alpha);

  QuadratureResult result;
  std::size_t evals = 0;
  double total = 0.0;
  double error = 0.0;
  for (const auto& term : detail::stream_terms(detector, config.n_r, n_t)) {
    const int big_m = static_cast<int>(term.n);
    for (int n = 1; n <= big_m; ++n) {
      const double log_choose = special::log_gamma(big_m + 1.0) - special::log_gamma(n + 1.0) -
                                special::log_gamma(big_m - n + 1.0);
      auto integrand = [&](double u) {
        const double log_y = half_alpha * std::log(u / c);
        const double log_term = log_choose + n * log_y - big_m * std::log1p(std::exp(log_y)) - u;
        return std::exp(log_term);
      };
      const auto r = quad::integrate_log_scale(integrand, u_lo, detail::u_upper,
                                               detail::outer_options(options.rel_tol * 1e-2));
      total += term.weight * r.value;
      error += term.weight * r.error_estimate;
      evals += r.node_counts.front();
    }
  }
  const double scale = config.lambda * half_alpha / std::numbers::ln2;
  result.value = scale * total;
  result.error_estimate = scale * error;
  result.node_counts = {evals};
  return result;
}

/// alpha = 4, n_t = n_r, interference-limited, link length d:
///   C = (2 lambda n_t / ln 2) [sin c (pi/2 - Si c) - cos c Ci c],
///   c = pi lambda d^2 Gamma(n_t + 1/2) Gamma(1/2) / Gamma(n_t).
inline double sum_se_closed_form_alpha4(const SystemConfig& config, double d) {
  config.validate();
  require(config.alpha == 4.0, ErrorKind::domain, "closed form requires alpha = 4");
  const int n_t = config.require_fixed_n_t("closed form");
  require(n_t == config.n_r, ErrorKind::domain, "closed form requires n_t = n_r");
  require(config.noise_to_power() == 0.0, ErrorKind::domain, "closed form is interference-limited");
  require(d > 0.0, ErrorKind::domain, "link distance must be positive");
  const double c = std::numbers::pi * config.lambda * d * d * special::gamma_ratio(n_t, 0.5) *
                   std::sqrt(std::numbers::pi);
  // The bracket is the auxiliary function g(c); past the series range it is
  // taken directly so the Si/Ci cancellation at large c does not eat it.
  double bracket;
  if (c <= 4.0) {
    bracket = std::sin(c) * (std::numbers::pi / 2.0 - special::sine_integral(c)) -
              std::cos(c) * special::cosine_integral(c);
  } else {
    bracket = special::auxiliary_fg(c).g;
  }
  return 2.0 * config.lambda * n_t / std::numbers::ln2 * bracket;
}

// ---------------------------------------------------------------------------
// Local CSIR.
//
// With sigma = pi lambda s^{2/alpha} and rho = lambda pi r^2 for the distance r
// of the L-th nearest interferer (rho ~ Gamma(L, 1)),
//   E[exp(-s I~)] = E_rho[exp(-sigma G(rho / sigma))],
//   G(c) = int_c^inf 1 - (1 + w^{-alpha/2})^{-n_t} dw.

namespace detail {

// f(w) = 1 - (1 + w^{-a})^{-n}
inline double tail_integrand(double w, double a, double n) {
  if (w == 0.0) return 1.0;
  return -std::expm1(-n * std::log1p(std::pow(w, -a)));
}

inline double tail_mass_at_zero(double n_t, double alpha) {
  const double delta = 2.0 / alpha;
  return special::gamma(1.0 - delta) * special::gamma_ratio(n_t, delta);
}

}  // namespace detail

/// G(c) for c >= 0.
inline double interference_tail_mass(double c, double n_t, double alpha) {
  require(c >= 0.0, ErrorKind::domain, "tail mass needs c >= 0");
  const double a = alpha / 2.0;
  quad::QuadratureOptions o;
  o.rel_tol = 1e-13;
  if (c <= 1.0) {
    if (c == 0.0) return detail::tail_mass_at_zero(n_t, alpha);
    auto f = [&](double w) { return detail::tail_integrand(w, a, n_t); };
    return detail::tail_mass_at_zero(n_t, alpha) - quad::integrate(f, 0.0, c, o).value;
  }
  // t = w^{1-a}: G(c) = 1/(a-1) int_0^{c^{1-a}} f(w) w^a dt, and with x = w^{-a}
  // the integrand is (1 - (1+x)^{-n}) / x, which tends to n at t = 0.
  auto g = [&](double t) {
    if (t == 0.0) return n_t;
    const double x = std::pow(t, a / (a - 1.0));
    return -std::expm1(-n_t * std::log1p(x)) / x;
  };
  return quad::integrate(g, 0.0, std::pow(c, 1.0 - a), o).value / (a - 1.0);
}

namespace detail {

// Lambda(sigma) for L >= 1 through rho in log scale.
inline QuadratureResult lcsir_laplace_sigma(double sigma, int l, double n_t, double alpha, double rel_tol) {
  if (sigma == 0.0) {
    QuadratureResult one;
    one.value = 1.0;
    one.node_counts = {0};
    return one;
  }
  if (l == 0) {
    QuadratureResult r;
    r.value = std::exp(-sigma * tail_mass_at_zero(n_t, alpha));
    r.node_counts = {0};
    return r;
  }
  const double log_gamma_l = special::log_gamma(l);
  const double rho_lo = std::exp((std::log(1e-17) + special::log_gamma(l + 1.0)) / l);
  const double rho_hi = l + 60.0 + 12.0 * std::sqrt(static_cast<double>(l));
  auto integrand = [&](double rho) {
    const double log_density = l * std::log(rho) - rho - log_gamma_l;  // rho * Gamma(L,1) pdf
    return std::exp(log_density - sigma * interference_tail_mass(rho / sigma, n_t, alpha));
  };
  quad::QuadratureOptions o;
  o.rel_tol = rel_tol;
  return quad::integrate_log_scale(integrand, rho_lo, rho_hi, o);
}

}  // namespace detail

/// E[exp(-s I~)] for the interference beyond the L nearest interferers.
/// L = 0 reduces to the direct-CSIR transform.
inline QuadratureResult laplace_interference_lcsir(double s, int l, const SystemConfig& config,
                                                   double rel_tol = 1e-10) {
  require(s >= 0.0, ErrorKind::domain, "Laplace argument must be non-negative");
  require(l >= 0, ErrorKind::invalid_l, "L must be non-negative");
  const int n_t = config.require_fixed_n_t("local-CSIR Laplace transform");
  const double sigma = std::numbers::pi * config.lambda * std::pow(s, 2.0 / config.alpha);
  return detail::lcsir_laplace_sigma(sigma, l, n_t, config.alpha, rel_tol);
}

/// Local-CSIR sum spectral efficiency per unit area with L cancelled
/// interferers, bits/s/Hz/m^2.
inline QuadratureResult sum_se_lcsir(const SystemConfig& config, int l, Detector detector,
                                     const AnalyticOptions& options = {}) {
  const int n_t = config.require_fixed_n_t("local-CSIR formula");
  require(l >= 1 && l <= config.n_r / n_t - 1, ErrorKind::invalid_l,
          "local CSIR requires 1 <= L <= floor(n_r / n_t) - 1");
  SystemConfig local = config;
  local.csir = CsirMode::local;
  local.l_cancel = l;
  local.validate();

  const double alpha = config.alpha;
  const double half_alpha = alpha / 2.0;
  const double pi_lambda = std::numbers::pi * config.lambda;
  const double noise = n_t * config.noise_to_power();
  const double g0 = detail::tail_mass_at_zero(n_t, alpha);

  std::vector<detail::StreamTerm> terms;
  if (detector == Detector::zf) {
    terms.push_back({static_cast<double>(n_t), static_cast<double>(config.n_r - (l + 1) * n_t + 1)});
  } else {
    for (int m = 1; m <= n_t; ++m) terms.push_back({1.0, static_cast<double>(config.n_r - n_t + m)});
  }
  const auto law = detail::lcsir_distance_law(config, options);

  std::size_t rho_evals = 0;
  std::size_t x_evals = 0;
  double inner_error = 0.0;
  auto s_of = [&](double sigma) { return std::pow(sigma / pi_lambda, half_alpha); };
  auto integrand = [&](double sigma) {
    const auto lap = detail::lcsir_laplace_sigma(sigma, l, n_t, alpha, options.rel_tol * 1e-2);
    rho_evals += lap.node_counts.front();
    if (lap.value != 0.0) inner_error = std::max(inner_error, lap.error_estimate / lap.value);
    const double s = s_of(sigma);
    auto bracket = [&](double x) {
      const double z = s * std::pow(x, -alpha);
      double acc = 0.0;
      for (const auto& t : terms) acc += t.weight * detail::stream_bracket(z, t.n);
      return acc;
    };
    const auto b = law.average(bracket, options.rel_tol * 1e-2);
    x_evals += b.node_counts.front();
    return lap.value * std::exp(-noise * s) * b.value;
  };

  // The bracket saturates once sigma passes pi lambda x^2, the transform dies
  // off past 1/G(0); below the smaller scale the integrand falls like
  // sigma^{alpha/2}.
  const double x_max = options.fixed_link_distance ? *options.fixed_link_distance : config.r_d;
  const double x_min = options.fixed_link_distance ? *options.fixed_link_distance : 1.0;
  const double scale_lo = std::min(pi_lambda * x_min * x_min, 1.0 / g0);
  const double sigma_lo = scale_lo * std::pow(detail::negligible, 1.0 / half_alpha);
  double sigma_hi = scale_lo;
  double peak = 0.0;
  for (int step = 0; step < 400; ++step) {
    const double v = integrand(sigma_hi);
    peak = std::max(peak, v);
    if (sigma_hi >= pi_lambda * x_max * x_max && sigma_hi >= 1.0 / g0 && v <= detail::negligible * peak * 1e-2)
      break;
    sigma_hi *= 2.0;
  }

  const auto outer = quad::integrate_log_scale(integrand, sigma_lo, sigma_hi, detail::outer_options(options.rel_tol));
  const double scale = config.lambda * half_alpha / std::numbers::ln2;
  QuadratureResult result;
  result.value = scale * outer.value;
  result.error_estimate = scale * outer.error_estimate + std::abs(result.value) * inner_error;
  result.node_counts = {outer.node_counts.front(), x_evals, rho_evals};
  return result;
}

// ---------------------------------------------------------------------------
// E[ln(1 + X / (Y + a))] = int_0^inf e^{-a z}/z (1 - E e^{-zX}) E e^{-zY} dz.

struct FadingLaw {
  enum class Kind { zero, point_mass, exponential, gamma } kind = Kind::zero;
  double shape = 1.0;  // gamma shape
  double scale = 1.0;  // mean for exponential, scale for gamma, value for point mass

  static FadingLaw zero() { return {Kind::zero, 1.0, 0.0}; }
  static FadingLaw point_mass(double value) { return {Kind::point_mass, 1.0, value}; }
  static FadingLaw exponential(double mean) { return {Kind::exponential, 1.0, mean}; }
  static FadingLaw gamma(double shape, double scale) { return {Kind::gamma, shape, scale}; }

  /// Builds a law from its name: zero, point, exponential, gamma, chi2 (the
  /// unit-mean-per-dimension Gamma(n, 1), parameter n).
  static FadingLaw parse(const std::string& name, const std::vector<double>& params) {
    std::size_t arity = 0;
    if (name == "point" || name == "exponential" || name == "chi2") {
      arity = 1;
    } else if (name == "gamma") {
      arity = 2;
    } else if (name != "zero") {
      throw Error(ErrorKind::unsupported_law, "unsupported law '" + name + "'");
    }
    require(params.size() == arity, ErrorKind::invalid_config,
            "law '" + name + "' takes " + std::to_string(arity) + " parameter(s)");
    if (name == "zero") return zero();
    if (name == "point") return point_mass(params[0]);
    if (name == "exponential") return exponential(params[0]);
    if (name == "gamma") return gamma(params[0], params[1]);
    return gamma(params[0], 1.0);
  }

  double mean() const {
    switch (kind) {
      case Kind::zero: return 0.0;
      case Kind::point_mass: return scale;
      case Kind::exponential: return scale;
      case Kind::gamma: return shape * scale;
    }
    return 0.0;
  }

  /// E[exp(-z X)]
  double laplace(double z) const { return 1.0 - laplace_complement(z); }

  /// 1 - E[exp(-z X)] without cancellation for small z.
  double laplace_complement(double z) const {
    switch (kind) {
      case Kind::zero: return 0.0;
      case Kind::point_mass: return -std::expm1(-z * scale);
      case Kind::exponential: return z * scale / (1.0 + z * scale);
      case Kind::gamma: return -std::expm1(-shape * std::log1p(z * scale));
    }
    return 0.0;
  }

  void validate() const {
    require(scale >= 0.0 && std::isfinite(scale), ErrorKind::invalid_config, "law parameter must be >= 0");
    if (kind == Kind::gamma) require(shape > 0.0, ErrorKind::invalid_config, "gamma shape must be positive");
  }
};

inline double hamdi_expectation(const FadingLaw& x, const FadingLaw& y, double a) {
  require(a > 0.0 && std::isfinite(a), ErrorKind::domain, "a must be positive");
  x.validate();
  y.validate();
  if (x.mean() == 0.0) return 0.0;
  auto integrand = [&](double z) { return std::exp(-a * z) * x.laplace_complement(z) * y.laplace(z); };
  // Below z_lo the integrand is at most E[X] z_lo; past z_hi e^{-a z} < e^{-45}.
  const double z_lo = 1e-17 / std::max(1.0, x.mean());
  const double z_hi = 45.0 / a;
  quad::QuadratureOptions o;
  o.rel_tol = 1e-11;
  return quad::integrate_log_scale(integrand, z_lo, z_hi, o).value;
}

}  // namespace mimonet
