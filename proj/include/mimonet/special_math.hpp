#pragma once

// Real special functions used by the closed-form expressions: Gamma and its
// logarithm, integer digamma, and the sine/cosine integrals.

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "mimonet/error.hpp"

namespace mimonet::special {

inline constexpr double euler_gamma = std::numbers::egamma;

namespace detail {

// Lanczos approximation, g = 7, nine coefficients.
inline constexpr double lanczos_g = 7.0;
inline constexpr std::array<double, 9> lanczos_coefficients = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

inline double lanczos_series(double xm1) {
  double sum = lanczos_coefficients[0];
  for (std::size_t i = 1; i < lanczos_coefficients.size(); ++i) {
    sum += lanczos_coefficients[i] / (xm1 + static_cast<double>(i));
  }
  return sum;
}

// Tail of Stirling's series for ln Gamma(y), without the leading terms.
inline double stirling_tail(double y) {
  const double inv = 1.0 / y;
  const double inv2 = inv * inv;
  return inv * (1.0 / 12.0 -
                inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0))));
}

}  // namespace detail

/// ln Gamma(x) for x > 0.
inline double log_gamma(double x) {
  require(x > 0.0 && std::isfinite(x), ErrorKind::domain, "log_gamma requires finite x > 0");
  if (x < 0.5) return log_gamma(x + 1.0) - std::log(x);
  const double xm1 = x - 1.0;
  const double t = xm1 + detail::lanczos_g + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (xm1 + 0.5) * std::log(t) - t +
         std::log(detail::lanczos_series(xm1));
}

/// Gamma(x) for x > 0. Overflows to +inf past x ~ 171.6.
inline double gamma(double x) {
  require(x > 0.0 && std::isfinite(x), ErrorKind::domain, "gamma requires finite x > 0");
  if (x < 0.5) return gamma(x + 1.0) / x;
  if (x > 171.0) return std::exp(log_gamma(x));
  const double xm1 = x - 1.0;
  const double t = xm1 + detail::lanczos_g + 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, xm1 + 0.5) * std::exp(-t) *
         detail::lanczos_series(xm1);
}

/// ln(Gamma(x + a) / Gamma(x)); stays accurate when x is huge and a is O(1).
inline double log_gamma_ratio(double x, double a) {
  require(x > 0.0 && x + a > 0.0, ErrorKind::domain, "log_gamma_ratio requires x > 0, x + a > 0");
  if (a == 0.0) return 0.0;
  const double y = x + a;
  if (x < 20.0 || y < 20.0) return log_gamma(y) - log_gamma(x);
  return (x - 0.5) * std::log1p(a / x) + a * std::log(y) - a + detail::stirling_tail(y) -
         detail::stirling_tail(x);
}

/// Gamma(x + a) / Gamma(x).
inline double gamma_ratio(double x, double a) { return std::exp(log_gamma_ratio(x, a)); }

/// psi(n) = -gamma + H_{n-1} for integer n >= 1.
inline double digamma_integer(long long n) {
  require(n >= 1, ErrorKind::domain, "digamma_integer requires n >= 1");
  double harmonic = 0.0;
  for (long long j = n - 1; j >= 1; --j) harmonic += 1.0 / static_cast<double>(j);
  return harmonic - euler_gamma;
}

struct SiCi {
  double si;
  double ci;
};

namespace detail {

inline constexpr double sici_switch = 4.0;

// Power series, z > 0.
inline SiCi sici_series(double z) {
  double si = 0.0;
  double ci_sum = 0.0;
  double odd = z;  // (-1)^k z^(2k+1) / (2k+1)!
  for (int k = 0; k < 60; ++k) {
    const double n = 2.0 * k + 1.0;
    const double si_term = odd / n;
    const double even = -odd * z / (n + 1.0);  // (-1)^(k+1) z^(2k+2) / (2k+2)!
    const double ci_term = even / (n + 1.0);
    si += si_term;
    ci_sum += ci_term;
    odd = even * z / (n + 2.0);
    if (std::abs(si_term) < 1e-18 * std::abs(si) &&
        std::abs(ci_term) < 1e-18 * (1.0 + std::abs(ci_sum)))
      break;
  }
  const double ci = euler_gamma + std::log(z) + ci_sum;
  return {si, ci};
}

// E1(i z) e^{i z} = g(z) - i f(z) by its continued fraction; converges for z
// away from 0 and is used past sici_switch.
inline std::complex<double> e1_imaginary_scaled(double z) {
  using cplx = std::complex<double>;
  constexpr double tiny = 1e-300;
  cplx b(1.0, z);
  cplx c(1.0 / tiny, 0.0);
  cplx d = 1.0 / b;
  cplx h = d;
  for (int i = 2; i < 10000; ++i) {
    const double a = -static_cast<double>(i - 1) * static_cast<double>(i - 1);
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const cplx del = c * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < 1e-15) break;
  }
  return h;
}

inline SiCi sici_auxiliary(double z) {
  const std::complex<double> e1 = e1_imaginary_scaled(z) * std::complex<double>(std::cos(z), -std::sin(z));
  return {std::numbers::pi / 2.0 + e1.imag(), -e1.real()};
}

}  // namespace detail

/// Si(z) = int_0^z sin(t)/t dt for z >= 0.
inline double sine_integral(double z) {
  require(z >= 0.0 && std::isfinite(z), ErrorKind::domain, "sine_integral requires finite z >= 0");
  if (z == 0.0) return 0.0;
  return z <= detail::sici_switch ? detail::sici_series(z).si : detail::sici_auxiliary(z).si;
}

/// Ci(z) = -int_z^inf cos(t)/t dt for z > 0.
inline double cosine_integral(double z) {
  require(z > 0.0 && std::isfinite(z), ErrorKind::domain, "cosine_integral requires finite z > 0");
  return z <= detail::sici_switch ? detail::sici_series(z).ci : detail::sici_auxiliary(z).ci;
}

/// Auxiliary functions of the sine/cosine integrals:
/// f(z) = Ci(z) sin z - (Si(z) - pi/2) cos z, g(z) = -Ci(z) cos z - (Si(z) - pi/2) sin z.
/// Past the switch point they come straight from the continued fraction, which
/// keeps full relative accuracy where the Si/Ci combination cancels.
struct AuxiliaryFG {
  double f;
  double g;
};

inline AuxiliaryFG auxiliary_fg(double z) {
  require(z > 0.0 && std::isfinite(z), ErrorKind::domain, "auxiliary_fg requires finite z > 0");
  if (z > detail::sici_switch) {
    const std::complex<double> h = detail::e1_imaginary_scaled(z);
    return {-h.imag(), h.real()};
  }
  const SiCi v = detail::sici_series(z);
  const double shifted = v.si - std::numbers::pi / 2.0;
  return {v.ci * std::sin(z) - shifted * std::cos(z), -v.ci * std::cos(z) - shifted * std::sin(z)};
}

}  // namespace mimonet::special
