#include <cmath>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <gtest/gtest.h>

#include "mimonet/channel.hpp"
#include "mimonet/stats.hpp"

namespace {

using namespace mimonet;

NetworkRealization two_interferers() {
  NetworkRealization net;
  net.typical_n_t = 2;
  net.window_radius = 100.0;
  net.interferers = {{10.0, 1}, {20.0, 3}};
  return net;
}

TEST(Channels, ShapesFollowRealization) {
  const auto ch = sample_channels(two_interferers(), 4, 1);
  EXPECT_EQ(ch.direct.rows(), 4);
  EXPECT_EQ(ch.direct.cols(), 2);
  ASSERT_EQ(ch.interferers.size(), 2u);
  EXPECT_EQ(ch.interferers[0].cols(), 1);
  EXPECT_EQ(ch.interferers[1].cols(), 3);

  NetworkRealization alone;
  alone.typical_n_t = 1;
  EXPECT_TRUE(sample_channels(alone, 2, 1).interferers.empty());
}

TEST(Channels, Deterministic) {
  const auto a = sample_channels(two_interferers(), 4, 42);
  const auto b = sample_channels(two_interferers(), 4, 42);
  EXPECT_EQ(a.direct, b.direct);
  EXPECT_EQ(a.interferers[1], b.interferers[1]);
}

TEST(Channels, EntryLaw) {
  Engine engine = make_engine(7);
  std::vector<double> power;
  std::vector<double> re;
  std::vector<double> im;
  for (int i = 0; i < 25000; ++i) {
    const ComplexMatrix m = sample_gaussian_matrix(engine, 2, 2);
    for (Eigen::Index k = 0; k < m.size(); ++k) {
      power.push_back(std::norm(m(k)));
      re.push_back(m(k).real());
      im.push_back(m(k).imag());
    }
  }
  EXPECT_NEAR(stats::summarize(power).mean, 1.0, 0.01);
  EXPECT_NEAR(stats::summarize(re).mean, 0.0, 0.01);
  const boost::math::normal_distribution<double> half(0.0, std::sqrt(0.5));
  auto cdf = [&](double x) { return boost::math::cdf(half, x); };
  EXPECT_GT(stats::ks_test(std::vector<double>(re.begin(), re.begin() + 20000), cdf).p_value, 0.01);
  EXPECT_GT(stats::ks_test(std::vector<double>(im.begin(), im.begin() + 20000), cdf).p_value, 0.01);
}

TEST(Channels, ColumnNormIsGamma) {
  std::vector<double> norms;
  NetworkRealization net;
  net.typical_n_t = 1;
  for (std::uint64_t i = 0; i < 20000; ++i) norms.push_back(sample_channels(net, 4, derive_seed(1, i)).direct.squaredNorm());
  EXPECT_NEAR(stats::summarize(norms).mean, 4.0, 0.04);
  EXPECT_GT(stats::ks_test(norms, [](double x) { return stats::gamma_cdf_integer(4, x); }).p_value, 0.01);
}

TEST(Channels, IndependentAcrossLinks) {
  std::vector<double> a;
  std::vector<double> b;
  for (std::uint64_t i = 0; i < 100000; ++i) {
    const auto ch = sample_channels(two_interferers(), 1, derive_seed(2, i));
    a.push_back(ch.direct(0, 0).real());
    b.push_back(ch.interferers[0](0, 0).real());
  }
  const auto sa = stats::summarize(a);
  const auto sb = stats::summarize(b);
  double cov = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) cov += (a[i] - sa.mean) * (b[i] - sb.mean);
  cov /= static_cast<double>(a.size() - 1);
  EXPECT_LT(std::abs(cov / std::sqrt(sa.variance * sb.variance)), 0.02);
}

TEST(Seeds, DistinctStreams) {
  EXPECT_NE(derive_seed(1, 0, 0), derive_seed(1, 0, 1));
  EXPECT_NE(derive_seed(1, 0, 0), derive_seed(1, 1, 0));
  EXPECT_NE(derive_seed(1, 0, 0), derive_seed(2, 0, 0));
  EXPECT_EQ(derive_seed(9, 5, 3), derive_seed(9, 5, 3));
}

}  // namespace
