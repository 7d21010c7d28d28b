#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "mimonet/analytic.hpp"
#include "mimonet/bounds.hpp"

namespace {

using namespace mimonet;
using boost::math::quadrature::gauss_kronrod;

SystemConfig limited(double lambda, int n_t, int n_r) {
  SystemConfig c = SystemConfig::fixed(lambda, n_t, n_r);
  c.interference_limited = true;
  return c;
}

TEST(LinkMoments, MatchQuadrature) {
  for (double alpha : {2.5, 3.0, 4.0, 5.5}) {
    for (double r_d : {2.0, 50.0}) {
      auto density = [r_d](double d) { return 2.0 * d / (r_d * r_d - 1.0); };
      const double gain = gauss_kronrod<double, 31>::integrate(
          [&](double d) { return std::pow(d, -alpha) * density(d); }, 1.0, r_d, 15, 1e-13);
      const double loss = gauss_kronrod<double, 31>::integrate(
          [&](double d) { return std::pow(d, alpha) * density(d); }, 1.0, r_d, 15, 1e-13);
      EXPECT_NEAR(mean_inverse_link_gain(alpha, r_d) / gain, 1.0, 1e-11);
      EXPECT_NEAR(mean_link_loss(alpha, r_d) / loss, 1.0, 1e-11);
    }
  }
}

TEST(InterferenceConstant, MatchesGammaFunctions) {
  for (double alpha : {3.0, 4.0}) {
    for (double n_t : {1.0, 2.0, 7.0, 250.5}) {
      const double expected = std::log(boost::math::tgamma(1.0 - 2.0 / alpha)) -
                              std::log(boost::math::tgamma_delta_ratio(n_t, 2.0 / alpha));
      EXPECT_NEAR(log_interference_constant(n_t, alpha), expected, 1e-12);
    }
  }
}

TEST(InterferenceConstant, InverseMomentFromLaplace) {
  // E[1/I] = int_0^inf E[e^{-sI}] ds should equal Gamma(1 + alpha/2) / (lambda pi K')^{alpha/2}.
  const SystemConfig c = limited(3e-5, 2, 4);
  boost::math::quadrature::exp_sinh<double> half_line;
  const double numeric = half_line.integrate([&](double s) { return laplace_interference_dcsir(s, c); }, 1e-13);
  const double closed = std::tgamma(3.0) / std::pow(c.lambda * std::numbers::pi *
                                                        std::exp(log_interference_constant(2.0, 4.0)), 2.0);
  EXPECT_NEAR(numeric / closed, 1.0, 1e-8);
}

TEST(StreamSum, MatchesDirectSum) {
  struct P {
    double a, k;
    long long count;
  };
  for (const P& p : {P{0.0, 3.0, 10}, P{1e-3, 0.4, 7}, P{2.5, -0.6, 2000}, P{1e-7, 2.0, 5000}, P{0.3, 1e3, 12000},
                     P{40.0, -1.0, 100000}}) {
    long double direct = 0.0L;
    for (long long m = 1; m <= p.count; ++m) direct += std::log1p(static_cast<long double>(p.a) * (p.k + m));
    direct /= std::numbers::ln2_v<long double>;
    const double got = log2_stream_sum(p.a, p.k, p.count);
    EXPECT_NEAR(got, static_cast<double>(direct), 1e-10 * std::max(1.0, static_cast<double>(direct)))
        << p.a << ' ' << p.k << ' ' << p.count;
  }
  EXPECT_THROW(log2_stream_sum(-1.0, 0.0, 3), Error);
}

TEST(DirectBounds, SandwichTheIntegral) {
  for (double lambda : {1e-5, 1e-4}) {
    for (int n_t : {1, 3}) {
      for (int n_r : {3, 6}) {
        const SystemConfig c = limited(lambda, n_t, n_r);
        for (Detector det : {Detector::zf, Detector::zf_sic}) {
          const BoundPair b = bounds_dcsir(c, det);
          const double v = sum_se_dcsir(c, det).value;
          EXPECT_LE(b.lower, v) << lambda << ' ' << n_t << ' ' << n_r << ' ' << to_string(det);
          EXPECT_GE(b.upper, v) << lambda << ' ' << n_t << ' ' << n_r << ' ' << to_string(det);
          EXPECT_EQ(b.epsilon, 0.4);
        }
      }
    }
  }
}

TEST(DirectBounds, EpsilonKeepsSquareLowerBoundPositive) {
  const BoundPair b = bounds_dcsir(limited(1e-4, 3, 3), Detector::zf);
  EXPECT_GT(b.lower, 0.0);
  EXPECT_GT(bounds_dcsir(limited(1e-4, 3, 3), Detector::zf, 0.9).lower, b.lower);
}

TEST(DirectBounds, SicAtLeastZf) {
  for (int n_t : {2, 4}) {
    const SystemConfig c = limited(1e-4, n_t, 8);
    EXPECT_GE(bounds_dcsir(c, Detector::zf_sic).lower, bounds_dcsir(c, Detector::zf).lower);
    EXPECT_GE(bounds_dcsir(c, Detector::zf_sic).upper, bounds_dcsir(c, Detector::zf).upper);
  }
}

TEST(DirectBounds, SingleStreamDetectorsCoincide) {
  const SystemConfig c = limited(1e-4, 1, 4);
  EXPECT_NEAR(bounds_dcsir(c, Detector::zf).lower, bounds_dcsir(c, Detector::zf_sic).lower, 1e-15);
  EXPECT_NEAR(bounds_dcsir(c, Detector::zf).upper, bounds_dcsir(c, Detector::zf_sic).upper, 1e-15);
}

TEST(DirectBounds, FiniteNearAlphaTwo) {
  SystemConfig c = limited(1e-4, 1, 4);
  c.alpha = 2.05;
  const BoundPair b = bounds_dcsir(c, Detector::zf);
  EXPECT_TRUE(std::isfinite(b.lower));
  EXPECT_TRUE(std::isfinite(b.upper));
  EXPECT_LE(b.lower, b.upper);
}

TEST(LocalBounds, BelowIntegral) {
  for (int n_r : {4, 8, 12}) {
    const SystemConfig c = limited(1e-4, 1, n_r);
    for (int l = 3; l <= n_r - 1; ++l) {
      for (Detector det : {Detector::zf, Detector::zf_sic}) {
        EXPECT_LE(lower_bound_lcsir(c, det, l), sum_se_lcsir(c, l, det).value) << n_r << ' ' << l;
      }
    }
  }
}

TEST(LocalBounds, NeedLAboveHalfAlpha) {
  const SystemConfig c = limited(1e-4, 1, 8);
  for (int l : {1, 2}) {
    try {
      lower_bound_lcsir(c, Detector::zf, l);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::invalid_l);
    }
  }
  EXPECT_THROW(lower_bound_lcsir(c, Detector::zf, 8), Error);
  EXPECT_GT(lower_bound_lcsir(c, Detector::zf, 3), 0.0);
}

TEST(OptimalDensity, PrintedExample) {
  const SystemConfig c = limited(1e-5, 1, 4);
  const double expected = std::sqrt(3.0) / (std::pow(2.0, std::numbers::ln2 - 1.0) * std::tgamma(1.5) *
                                            std::tgamma(0.5) * std::numbers::pi * 2501.0);
  const OptimalDensity o = optimal_density(c, Detector::zf, CsirMode::direct);
  EXPECT_NEAR(o.lambda_star / expected, 1.0, 1e-12);
  EXPECT_EQ(o.aloha_probability, 1.0);
}

TEST(OptimalDensity, AlohaClamp) {
  const SystemConfig c = limited(1e-5, 1, 4);
  const double star = optimal_density(c, Detector::zf, CsirMode::direct).lambda_star;
  EXPECT_EQ(optimal_density(limited(0.5 * star, 1, 4), Detector::zf, CsirMode::direct).aloha_probability, 1.0);
  EXPECT_NEAR(optimal_density(limited(4.0 * star, 1, 4), Detector::zf, CsirMode::direct).aloha_probability, 0.25,
              1e-12);
}

TEST(OptimalDensity, SicAtLeastZf) {
  for (int n_t : {2, 3}) {
    for (int n_r : {n_t + 1, 8}) {
      const SystemConfig c = limited(1e-5, n_t, n_r);
      EXPECT_GE(optimal_density(c, Detector::zf_sic, CsirMode::direct).lambda_star,
                optimal_density(c, Detector::zf, CsirMode::direct).lambda_star);
    }
  }
}

TEST(OptimalDensity, StationaryFormMaximizesBound) {
  // lambda log(a dof) with a ~ lambda^{-alpha/2} peaks where a dof = e^{alpha/2}.
  const SystemConfig c = limited(1e-5, 1, 4);
  const double star = optimal_density(c, Detector::zf, CsirMode::direct, DensityForm::stationary).lambda_star;
  const double lower = bounds_dcsir(limited(star, 1, 4), Detector::zf, 0.0).lower;
  EXPECT_NEAR(lower / (star / 2.0 * std::log2(1.0 + std::exp(2.0))), 1.0, 1e-12);
}

TEST(OptimalDensity, LocalNeedsLargeL) {
  SystemConfig c = limited(1e-5, 1, 8);
  c.csir = CsirMode::local;
  c.l_cancel = 2;
  EXPECT_THROW(optimal_density(c, Detector::zf, CsirMode::local), Error);
  c.l_cancel = 4;
  EXPECT_GT(optimal_density(c, Detector::zf, CsirMode::local).lambda_star, 0.0);
}

TEST(OptimalStreams, LinearInReceiveAntennas) {
  const double a = optimal_stream_count(limited(1e-6, 1, 8));
  const double b = optimal_stream_count(limited(1e-6, 1, 16));
  EXPECT_NEAR(b / a, 2.0, 1e-12);
  const SystemConfig c = limited(1e-6, 1, 8);
  const double expected = std::pow(2.0 / std::tgamma(0.5), 2.0) /
                          std::pow(c.lambda * std::numbers::pi * 2500.0, 2.0) * 8.0 / std::numbers::e;
  EXPECT_NEAR(a / expected, 1.0, 1e-12);
}

}  // namespace
