#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "mimonet/geometry.hpp"
#include "mimonet/rng.hpp"

namespace mimonet {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Channel matrices into the typical receiver. Entries are i.i.d. CN(0, 1).
struct ChannelSet {
  ComplexMatrix direct;                      // n_r x n_t of the typical transmitter
  std::vector<ComplexMatrix> interferers;    // aligned with NetworkRealization::interferers
};

/// n_r x n_t matrix of CN(0, 1) entries (real and imaginary parts N(0, 1/2)).
inline ComplexMatrix sample_gaussian_matrix(Engine& engine, int n_r, int n_t) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix m(n_r, n_t);
  for (int j = 0; j < n_t; ++j) {
    for (int i = 0; i < n_r; ++i) {
      const double re = normal(engine);
      const double im = normal(engine);
      m(i, j) = {re, im};
    }
  }
  return m;
}

inline ChannelSet sample_channels(const NetworkRealization& realization, int n_r, std::uint64_t seed) {
  Engine engine = make_engine(seed);
  ChannelSet channels;
  channels.direct = sample_gaussian_matrix(engine, n_r, realization.typical_n_t);
  channels.interferers.reserve(realization.interferers.size());
  for (const Interferer& node : realization.interferers) {
    channels.interferers.push_back(sample_gaussian_matrix(engine, n_r, node.n_t));
  }
  return channels;
}

}  // namespace mimonet
