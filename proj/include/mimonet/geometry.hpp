#pragma once

// Poisson bipolar topology sampled under the Palm convention: the typical
// receiver sits at the origin, its transmitter is added on top of the PPP.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "mimonet/config.hpp"
#include "mimonet/error.hpp"
#include "mimonet/rng.hpp"

namespace mimonet {

struct Interferer {
  double distance;  // to the typical receiver, m
  int n_t;
};

/// One sampled topology. Only distances are kept; angles do not enter the SINR.
struct NetworkRealization {
  double typical_link_distance = 1.0;
  int typical_n_t = 1;
  /// Ascending by distance. Entries past window_radius exist only when the
  /// caller asked for a minimum interferer count the window did not supply.
  std::vector<Interferer> interferers;
  double window_radius = 0.0;

  /// Interferers inside the window.
  std::size_t in_window_count() const {
    std::size_t count = 0;
    while (count < interferers.size() && interferers[count].distance <= window_radius) ++count;
    return count;
  }
};

/// Inverse CDF of the ring-uniform link distance, density 2r / (R_d^2 - 1) on [1, R_d].
inline double link_distance_quantile(double u, double r_d) {
  return std::sqrt(1.0 + u * (r_d * r_d - 1.0));
}

namespace detail {

inline int draw_antenna_count(Engine& engine, const std::vector<double>& p) {
  std::discrete_distribution<int> dist(p.begin(), p.end());
  return dist(engine) + 1;
}

}  // namespace detail

/// Samples the PPP inside a disk of radius `window_radius` around the typical
/// receiver. Points are generated in distance order from the unit-rate arrival
/// times lambda * pi * r^2, so the in-window count is Poisson(lambda pi W^2)
/// and the list comes out sorted. When `min_interferers` exceeds the in-window
/// count the process is continued past the window until that many exist.
inline NetworkRealization sample_network(const SystemConfig& config, double window_radius,
                                         std::uint64_t seed, std::size_t min_interferers = 0) {
  require(window_radius > config.r_d, ErrorKind::invalid_config, "window_radius must exceed r_d");
  Engine engine = make_engine(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::exponential_distribution<double> arrival(1.0);

  NetworkRealization realization;
  realization.window_radius = window_radius;
  realization.typical_link_distance = link_distance_quantile(uniform(engine), config.r_d);
  realization.typical_n_t = detail::draw_antenna_count(engine, config.antenna_dist);

  const double scale = 1.0 / (config.lambda * std::numbers::pi);
  double area_time = 0.0;
  while (true) {
    area_time += arrival(engine);
    const double distance = std::sqrt(area_time * scale);
    if (distance > window_radius && realization.interferers.size() >= min_interferers) break;
    realization.interferers.push_back({distance, detail::draw_antenna_count(engine, config.antenna_dist)});
  }
  return realization;
}

/// Restores ascending distance order; equal distances keep insertion order.
inline void sort_by_distance(NetworkRealization& realization) {
  std::stable_sort(realization.interferers.begin(), realization.interferers.end(),
                   [](const Interferer& a, const Interferer& b) { return a.distance < b.distance; });
}

/// The `count` closest interferers.
inline std::span<const Interferer> nearest_interferers(const NetworkRealization& realization,
                                                       std::size_t count) {
  require(realization.interferers.size() >= count, ErrorKind::insufficient_interferers,
          "realization holds fewer interferers than requested; enlarge the window");
  return std::span<const Interferer>(realization.interferers).first(count);
}

}  // namespace mimonet
