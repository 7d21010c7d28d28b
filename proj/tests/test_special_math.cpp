#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "mimonet/special_math.hpp"

namespace {

using namespace mimonet;
using boost::math::quadrature::gauss_kronrod;

double si_oracle(double z) {
  auto f = [](double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; };
  return gauss_kronrod<double, 61>::integrate(f, 0.0, z, 15, 1e-14);
}

double ci_oracle(double z) {
  auto f = [](double t) { return t == 0.0 ? 0.0 : (std::cos(t) - 1.0) / t; };
  return std::numbers::egamma + std::log(z) + gauss_kronrod<double, 61>::integrate(f, 0.0, z, 15, 1e-14);
}

TEST(Gamma, MatchesBoostAcrossRange) {
  for (double x = 0.05; x < 40.0; x *= 1.37) {
    EXPECT_NEAR(special::log_gamma(x), boost::math::lgamma(x), 1e-12 * std::max(1.0, std::abs(boost::math::lgamma(x))))
        << x;
    if (x < 25.0) EXPECT_NEAR(special::gamma(x) / boost::math::tgamma(x), 1.0, 1e-12) << x;
  }
}

TEST(Gamma, RecurrenceHolds) {
  for (double x = 0.1; x < 20.0; x += 0.37) {
    EXPECT_NEAR(special::gamma(x + 1.0) / (x * special::gamma(x)), 1.0, 1e-10) << x;
  }
}

TEST(Gamma, KnownValues) {
  EXPECT_NEAR(special::gamma(0.5), std::sqrt(std::numbers::pi), 1e-14);
  EXPECT_NEAR(special::gamma(5.0), 24.0, 1e-12);
  EXPECT_NEAR(special::gamma(1.5), 0.5 * std::sqrt(std::numbers::pi), 1e-14);
}

TEST(Gamma, RejectsNonPositive) {
  EXPECT_THROW(special::gamma(0.0), Error);
  EXPECT_THROW(special::log_gamma(-1.0), Error);
}

TEST(GammaRatio, MatchesBoostForLargeArguments) {
  for (double x : {1.0, 3.0, 50.0, 1e4, 1e8}) {
    for (double a : {0.5, 2.0 / 3.0, -0.25}) {
      const double expected = boost::math::tgamma_delta_ratio(x, a);  // Gamma(x)/Gamma(x+a)
      EXPECT_NEAR(special::gamma_ratio(x, a) * expected, 1.0, 1e-11) << x << ' ' << a;
    }
  }
}

TEST(GammaRatio, InequalitiesUsedByTheBounds) {
  for (double alpha : {2.5, 3.0, 4.0, 6.0}) {
    const double delta = 2.0 / alpha;
    for (int n = 1; n <= 64; n *= 2) {
      EXPECT_GE(1.0 / special::gamma_ratio(n, delta), std::pow(n, -delta) * (1.0 - 1e-14));
    }
    for (double x = 1.1; x < 40.0; x *= 1.5) {
      EXPECT_LE(1.0 / special::gamma_ratio(x, delta), std::pow(x - 1.0, -delta) * (1.0 + 1e-14));
    }
  }
}

TEST(Digamma, IntegerValues) {
  EXPECT_NEAR(special::digamma_integer(1), -0.5772156649015329, 1e-15);
  EXPECT_NEAR(special::digamma_integer(2), 1.0 - std::numbers::egamma, 1e-15);
  double harmonic = 0.0;
  for (int k = 1; k <= 9; ++k) harmonic += 1.0 / k;
  EXPECT_NEAR(special::digamma_integer(10), -std::numbers::egamma + harmonic, 1e-14);
  for (long long n : {3LL, 17LL, 1000LL, 100000LL}) {
    EXPECT_NEAR(special::digamma_integer(n), boost::math::digamma(static_cast<double>(n)), 1e-12) << n;
  }
  EXPECT_THROW(special::digamma_integer(0), Error);
}

TEST(SineCosineIntegral, MatchQuadratureOracle) {
  for (double z : {1e-6, 0.1, 0.5, 1.0, 2.0, 3.5, 3.99, 4.0, 4.01, 5.0, 8.0, 15.0, 30.0}) {
    EXPECT_NEAR(special::sine_integral(z), si_oracle(z), 1e-10) << z;
    EXPECT_NEAR(special::cosine_integral(z), ci_oracle(z), 1e-10) << z;
  }
}

TEST(SineCosineIntegral, SpecialPoints) {
  EXPECT_EQ(special::sine_integral(0.0), 0.0);
  const double bracket = std::numbers::pi / 2.0 - special::sine_integral(std::numbers::pi / 2.0);
  EXPECT_NEAR(2.0 / std::numbers::ln2 * bracket, 0.5772, 1e-3);
  EXPECT_NEAR(special::sine_integral(1e6), std::numbers::pi / 2.0, 1e-6);
  EXPECT_LT(std::abs(special::cosine_integral(1e6)), 1e-5);
  EXPECT_THROW(special::cosine_integral(0.0), Error);
  EXPECT_THROW(special::sine_integral(-1.0), Error);
}

TEST(SineCosineIntegral, SiBoundedOnZeroToPi) {
  const double peak = special::sine_integral(std::numbers::pi);
  for (double z = 0.0; z <= std::numbers::pi; z += 0.01) {
    const double v = special::sine_integral(z);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, peak + 1e-15);
  }
}

TEST(AuxiliaryFunctions, MatchDefiningIntegrals) {
  // f(z) = int_0^inf sin(t)/(t+z) dt = int_0^inf e^{-zu}/(1+u^2) du,
  // g(z) = int_0^inf cos(t)/(t+z) dt = int_0^inf u e^{-zu}/(1+u^2) du.
  for (double z : {0.3, 1.0, std::numbers::pi / 2.0, 3.9, 4.1, 7.0, 25.0}) {
    auto f = [z](double u) { return std::exp(-z * u) / (1.0 + u * u); };
    auto g = [z](double u) { return u * std::exp(-z * u) / (1.0 + u * u); };
    const double f_ref = gauss_kronrod<double, 61>::integrate(f, 0.0, std::numeric_limits<double>::infinity(), 15, 1e-14);
    const double g_ref = gauss_kronrod<double, 61>::integrate(g, 0.0, std::numeric_limits<double>::infinity(), 15, 1e-14);
    const auto fg = special::auxiliary_fg(z);
    EXPECT_NEAR(fg.f, f_ref, 1e-10) << z;
    EXPECT_NEAR(fg.g, g_ref, 1e-10) << z;
  }
}

}  // namespace
