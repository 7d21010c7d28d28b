#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mimonet/error.hpp"

namespace mimonet {

enum class CsirMode { direct, local };
enum class Detector { zf, zf_sic };

inline const char* to_string(CsirMode mode) { return mode == CsirMode::direct ? "direct" : "local"; }
inline const char* to_string(Detector detector) { return detector == Detector::zf ? "zf" : "zf_sic"; }

/// dBm to watts.
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

/// Probability vector p_1..p_{n_r} with all mass on n_t transmit antennas.
inline std::vector<double> point_mass_antennas(int n_t, int n_r) {
  require(n_t >= 1 && n_t <= n_r, ErrorKind::invalid_config, "n_t must lie in [1, n_r]");
  std::vector<double> p(static_cast<std::size_t>(n_r), 0.0);
  p[static_cast<std::size_t>(n_t - 1)] = 1.0;
  return p;
}

/// Physical and network parameters of the bipolar network.
struct SystemConfig {
  double lambda = 1e-5;  // transmitter intensity, m^-2
  double alpha = 4.0;    // path-loss exponent
  double r_d = 50.0;     // outer link-distance radius, m
  int n_r = 4;
  std::vector<double> antenna_dist = point_mass_antennas(1, 4);  // p_1 .. p_{n_r}
  double power_dbm = -20.0;
  double noise_dbm = -104.0;
  CsirMode csir = CsirMode::direct;
  int l_cancel = 0;
  bool interference_limited = false;

  static SystemConfig fixed(double lambda, int n_t, int n_r) {
    SystemConfig config;
    config.lambda = lambda;
    config.n_r = n_r;
    config.antenna_dist = point_mass_antennas(n_t, n_r);
    return config;
  }

  double power_watts() const { return dbm_to_watts(power_dbm); }
  double noise_watts() const { return interference_limited ? 0.0 : dbm_to_watts(noise_dbm); }
  /// sigma^2 / P; zero in the interference-limited regime.
  double noise_to_power() const { return noise_watts() / power_watts(); }

  /// Number of cancelled interferers actually in effect.
  int effective_l() const { return csir == CsirMode::local ? l_cancel : 0; }

  /// N_t when every transmitter carries the same antenna count.
  std::optional<int> fixed_n_t() const {
    for (std::size_t k = 0; k < antenna_dist.size(); ++k) {
      if (antenna_dist[k] == 1.0) return static_cast<int>(k + 1);
    }
    return std::nullopt;
  }

  int require_fixed_n_t(const char* what) const {
    const auto n_t = fixed_n_t();
    require(n_t.has_value(), ErrorKind::invalid_config,
            std::string(what) + " requires all transmitters to carry the same antenna count");
    return *n_t;
  }

  void validate() const {
    require(std::isfinite(lambda) && lambda > 0.0, ErrorKind::invalid_config, "lambda must be positive");
    require(std::isfinite(alpha) && alpha > 2.0, ErrorKind::invalid_config, "alpha must exceed 2");
    require(std::isfinite(r_d) && r_d > 1.0, ErrorKind::invalid_config, "r_d must exceed 1");
    require(n_r >= 1, ErrorKind::invalid_config, "n_r must be positive");
    require(antenna_dist.size() == static_cast<std::size_t>(n_r), ErrorKind::invalid_config,
            "antenna_dist must list p_1 .. p_{n_r}");
    double total = 0.0;
    for (double p : antenna_dist) {
      require(p >= 0.0, ErrorKind::invalid_config, "antenna probabilities must be non-negative");
      total += p;
    }
    require(std::abs(total - 1.0) <= 1e-12, ErrorKind::invalid_config, "antenna probabilities must sum to 1");
    require(std::isfinite(power_dbm) && std::isfinite(noise_dbm), ErrorKind::invalid_config,
            "powers must be finite");
    require(l_cancel >= 0, ErrorKind::invalid_config, "l_cancel must be non-negative");
    if (csir == CsirMode::direct) {
      require(l_cancel == 0, ErrorKind::invalid_config, "direct CSIR cancels no interferers");
    } else {
      const int n_t = require_fixed_n_t("local CSIR");
      const int l_max = n_r / n_t - 1;
      require(l_cancel >= 1 && l_cancel <= l_max, ErrorKind::invalid_l,
              "local CSIR requires 1 <= L <= floor(n_r / n_t) - 1");
    }
  }
};

}  // namespace mimonet
