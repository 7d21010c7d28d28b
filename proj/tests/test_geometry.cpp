#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "mimonet/geometry.hpp"
#include "mimonet/stats.hpp"

namespace {

using namespace mimonet;

TEST(LinkDistance, Quantile) {
  EXPECT_DOUBLE_EQ(link_distance_quantile(0.0, 50.0), 1.0);
  EXPECT_DOUBLE_EQ(link_distance_quantile(1.0, 50.0), 50.0);
  EXPECT_DOUBLE_EQ(link_distance_quantile(0.5, 50.0), std::sqrt(1250.5));
}

TEST(LinkDistance, RingLawKs) {
  SystemConfig config;
  std::vector<double> d;
  for (std::uint64_t i = 0; i < 100000; ++i) d.push_back(sample_network(config, 60.0, derive_seed(3, i)).typical_link_distance);
  const double r2 = config.r_d * config.r_d;
  const auto ks = stats::ks_test(d, [r2](double x) { return (x * x - 1.0) / (r2 - 1.0); });
  EXPECT_GT(ks.p_value, 0.01);
  for (double x : d) {
    EXPECT_GE(x, 1.0);
    EXPECT_LE(x, config.r_d);
  }
}

TEST(SampleNetwork, PoissonCount) {
  SystemConfig config = SystemConfig::fixed(4e-5, 1, 4);
  std::vector<double> counts;
  for (std::uint64_t i = 0; i < 100000; ++i) {
    counts.push_back(static_cast<double>(sample_network(config, 500.0, derive_seed(11, i)).in_window_count()));
  }
  const auto s = stats::summarize(counts);
  const double expected = 4e-5 * std::numbers::pi * 500.0 * 500.0;
  EXPECT_NEAR(s.mean, expected, 3.0 * s.std_error);
  EXPECT_GT(s.variance / s.mean, 0.95);
  EXPECT_LT(s.variance / s.mean, 1.05);
}

TEST(SampleNetwork, SortedAndDeterministic) {
  SystemConfig config = SystemConfig::fixed(1e-4, 2, 4);
  const auto a = sample_network(config, 300.0, 99);
  const auto b = sample_network(config, 300.0, 99);
  ASSERT_EQ(a.interferers.size(), b.interferers.size());
  for (std::size_t i = 0; i < a.interferers.size(); ++i) {
    EXPECT_EQ(a.interferers[i].distance, b.interferers[i].distance);
    EXPECT_EQ(a.interferers[i].n_t, 2);
    if (i > 0) EXPECT_LT(a.interferers[i - 1].distance, a.interferers[i].distance);
  }
  EXPECT_EQ(a.typical_link_distance, b.typical_link_distance);
  EXPECT_EQ(a.in_window_count(), a.interferers.size());
}

TEST(SampleNetwork, SparseNetworkIsUsuallyEmpty) {
  SystemConfig config = SystemConfig::fixed(1e-12, 1, 4);
  int empty = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) empty += sample_network(config, 500.0, i).interferers.empty();
  EXPECT_GE(empty, 999);
}

TEST(SampleNetwork, ContinuesPastWindowOnRequest) {
  SystemConfig config = SystemConfig::fixed(1e-6, 1, 4);
  const auto net = sample_network(config, 60.0, 5, 4);
  ASSERT_GE(net.interferers.size(), 4u);
  EXPECT_LE(net.in_window_count(), net.interferers.size());
}

TEST(SampleNetwork, RejectsSmallWindow) {
  SystemConfig config;
  try {
    sample_network(config, config.r_d, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_config);
  }
}

TEST(SampleNetwork, AntennaCountsFollowDistribution) {
  SystemConfig config;
  config.n_r = 4;
  config.antenna_dist = {0.25, 0.0, 0.75, 0.0};
  int threes = 0;
  int total = 0;
  for (std::uint64_t i = 0; i < 2000; ++i) {
    for (const auto& node : sample_network(config, 200.0, derive_seed(8, i)).interferers) {
      ASSERT_TRUE(node.n_t == 1 || node.n_t == 3);
      threes += node.n_t == 3;
      ++total;
    }
  }
  EXPECT_NEAR(static_cast<double>(threes) / total, 0.75, 0.01);
}

// The L-th nearest interferer has lambda pi r^2 ~ Gamma(L, 1).
class NearestLaw : public ::testing::TestWithParam<int> {};

TEST_P(NearestLaw, GammaInAreaUnits) {
  const int l = GetParam();
  SystemConfig config = SystemConfig::fixed(4e-5, 1, 4);
  std::vector<double> rho;
  for (std::uint64_t i = 0; i < 20000; ++i) {
    const auto net = sample_network(config, 500.0, derive_seed(21, i), static_cast<std::size_t>(l));
    const double r = nearest_interferers(net, static_cast<std::size_t>(l)).back().distance;
    rho.push_back(config.lambda * std::numbers::pi * r * r);
  }
  const auto ks = stats::ks_test(rho, [l](double x) { return stats::gamma_cdf_integer(l, x); });
  EXPECT_GT(ks.p_value, 0.01);
}

INSTANTIATE_TEST_SUITE_P(L, NearestLaw, ::testing::Values(1, 3));

TEST(NearestInterferers, PrefixAndTies) {
  NetworkRealization net;
  net.window_radius = 100.0;
  net.interferers = {{7.0, 1}, {2.0, 2}, {7.0, 3}, {9.0, 4}};
  sort_by_distance(net);
  const auto two = nearest_interferers(net, 2);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[0].distance, 2.0);
  EXPECT_EQ(two[1].n_t, 1);  // the first of the tied pair
  EXPECT_TRUE(nearest_interferers(net, 0).empty());
  try {
    nearest_interferers(net, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::insufficient_interferers);
  }
}

TEST(SystemConfig, Validation) {
  SystemConfig c;
  EXPECT_NO_THROW(c.validate());
  c.alpha = 2.0;
  EXPECT_THROW(c.validate(), Error);
  c = SystemConfig{};
  c.antenna_dist = {0.5, 0.5, 0.1, 0.0};
  EXPECT_THROW(c.validate(), Error);
  c = SystemConfig::fixed(1e-5, 2, 4);
  c.csir = CsirMode::local;
  c.l_cancel = 1;
  EXPECT_NO_THROW(c.validate());
  c.l_cancel = 2;
  try {
    c.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_l);
  }
  EXPECT_DOUBLE_EQ(dbm_to_watts(-20.0), 1e-5);
}

}  // namespace
