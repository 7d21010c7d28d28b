#pragma once

// Zero-forcing and ZF-SIC receive filters built by null-space projection, and
// the per-stream SINR decomposition (own streams, cancelled interferers, far
// interferers, noise).
//
// Streams are indexed from 0 here; stream m in the 1-based notation of the
// decoding order is index m - 1.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "mimonet/channel.hpp"
#include "mimonet/config.hpp"
#include "mimonet/error.hpp"
#include "mimonet/geometry.hpp"

namespace mimonet {

struct FilterBank {
  std::vector<ComplexVector> filters;  // one unit-norm filter per stream
  Detector detector = Detector::zf;
  /// Interferer indices nulled (ZF) or subtracted before detection (SIC).
  std::vector<std::size_t> cancelled;
};

struct SinrBreakdown {
  std::vector<double> per_stream_sinr;
  std::vector<double> signal_power;           // |v* h_m|^2 d^-alpha
  std::vector<double> residual_inter_stream;  // I_1
  std::vector<double> cancelled_interference; // I_2
  std::vector<double> far_interference;       // I_3
  double noise_term = 0.0;                    // n_t sigma^2 / P
};

/// Orthonormal basis (as columns) of the orthogonal complement of span(vectors).
/// `vectors` holds one n_r-dimensional vector per column.
inline ComplexMatrix null_space_basis(const ComplexMatrix& vectors, int n_r) {
  require(vectors.cols() < n_r, ErrorKind::dimension_exhausted,
          "null space needs fewer vectors than the receive dimension");
  if (vectors.cols() == 0) return ComplexMatrix::Identity(n_r, n_r);
  require(vectors.rows() == n_r, ErrorKind::domain, "vector length must equal n_r");
  Eigen::ColPivHouseholderQR<ComplexMatrix> qr(vectors);
  qr.setThreshold(1e-10);
  const Eigen::Index rank = qr.rank();
  const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n_r, n_r);
  return q.rightCols(n_r - rank);
}

/// Projects h onto span(basis) and normalizes.
inline ComplexVector projected_unit_filter(const ComplexMatrix& basis, const ComplexVector& h) {
  ComplexVector v = basis * (basis.adjoint() * h);
  const double norm = v.norm();
  require(norm > 0.0, ErrorKind::insufficient_dof, "signal has no component in the filter subspace");
  return v / norm;
}

namespace detail {

inline ComplexMatrix stack_columns(const ComplexMatrix& direct, std::size_t skip_below, std::size_t skip_exact,
                                   bool drop_lower, const std::vector<ComplexMatrix>& interferers,
                                   std::size_t interferer_count) {
  const auto n_r = direct.rows();
  Eigen::Index cols = 0;
  for (Eigen::Index j = 0; j < direct.cols(); ++j) {
    const auto col = static_cast<std::size_t>(j);
    if (col == skip_exact || (drop_lower && col < skip_below)) continue;
    ++cols;
  }
  for (std::size_t l = 0; l < interferer_count; ++l) cols += interferers[l].cols();
  ComplexMatrix stacked(n_r, cols);
  Eigen::Index at = 0;
  for (Eigen::Index j = 0; j < direct.cols(); ++j) {
    const auto col = static_cast<std::size_t>(j);
    if (col == skip_exact || (drop_lower && col < skip_below)) continue;
    stacked.col(at++) = direct.col(j);
  }
  for (std::size_t l = 0; l < interferer_count; ++l) {
    stacked.middleCols(at, interferers[l].cols()) = interferers[l];
    at += interferers[l].cols();
  }
  return stacked;
}

}  // namespace detail

/// ZF filter for `stream`: the unit vector in the null space of the other own
/// columns and of every column of the `cancelled` nearest interferers that
/// maximizes |v* h_stream|^2.
inline ComplexVector build_zf_filter(const ChannelSet& channels, std::size_t stream, std::size_t cancelled) {
  const auto n_r = static_cast<int>(channels.direct.rows());
  const auto n_t = static_cast<int>(channels.direct.cols());
  require(stream < static_cast<std::size_t>(n_t), ErrorKind::domain, "stream index out of range");
  require(cancelled <= channels.interferers.size(), ErrorKind::insufficient_interferers,
          "fewer interferer channels than cancelled interferers");
  int nulled = n_t - 1;
  for (std::size_t l = 0; l < cancelled; ++l) nulled += static_cast<int>(channels.interferers[l].cols());
  require(n_r - nulled >= 1, ErrorKind::insufficient_dof,
          "n_r - (n_t - 1) - sum of cancelled interferer antennas must be at least 1");
  const ComplexMatrix constraints =
      detail::stack_columns(channels.direct, 0, stream, false, channels.interferers, cancelled);
  return projected_unit_filter(null_space_basis(constraints, n_r), channels.direct.col(static_cast<Eigen::Index>(stream)));
}

inline FilterBank build_zf_filters(const ChannelSet& channels, std::size_t cancelled) {
  FilterBank bank;
  bank.detector = Detector::zf;
  for (std::size_t l = 0; l < cancelled; ++l) bank.cancelled.push_back(l);
  for (Eigen::Index m = 0; m < channels.direct.cols(); ++m) {
    bank.filters.push_back(build_zf_filter(channels, static_cast<std::size_t>(m), cancelled));
  }
  return bank;
}

/// ZF-SIC filters in decoding order: the filter of stream m nulls only the
/// not-yet-decoded own streams m+1..n_t-1. The `cancelled` nearest
/// interferers are subtracted before detection, so they cost no dimensions.
inline FilterBank build_sic_filters(const ChannelSet& channels, std::size_t cancelled = 0) {
  const auto n_r = static_cast<int>(channels.direct.rows());
  const auto n_t = static_cast<int>(channels.direct.cols());
  require(n_r >= n_t, ErrorKind::insufficient_dof, "ZF-SIC requires n_r >= n_t");
  require(cancelled <= channels.interferers.size(), ErrorKind::insufficient_interferers,
          "fewer interferer channels than cancelled interferers");
  FilterBank bank;
  bank.detector = Detector::zf_sic;
  for (std::size_t l = 0; l < cancelled; ++l) bank.cancelled.push_back(l);
  for (int m = 0; m < n_t; ++m) {
    const ComplexMatrix later = channels.direct.rightCols(n_t - m - 1);
    bank.filters.push_back(projected_unit_filter(null_space_basis(later, n_r), channels.direct.col(m)));
  }
  return bank;
}

inline FilterBank build_filters(const ChannelSet& channels, Detector detector, std::size_t cancelled) {
  return detector == Detector::zf ? build_zf_filters(channels, cancelled) : build_sic_filters(channels, cancelled);
}

/// Per-stream SINR. Only interferers inside the window contribute to I_3.
/// Under ZF-SIC earlier own streams and the cancelled interferers are removed
/// exactly before detection.
inline SinrBreakdown compute_sinr(const FilterBank& bank, const ChannelSet& channels,
                                  const NetworkRealization& realization, const SystemConfig& config) {
  const double alpha = config.alpha;
  const double own_path = std::pow(realization.typical_link_distance, -alpha);
  const auto n_t = static_cast<std::size_t>(channels.direct.cols());
  const std::size_t in_window = realization.in_window_count();
  std::vector<bool> is_cancelled(channels.interferers.size(), false);
  for (std::size_t l : bank.cancelled) is_cancelled.at(l) = true;

  std::vector<double> far_path(channels.interferers.size());
  for (std::size_t l = 0; l < far_path.size(); ++l) {
    far_path[l] = std::pow(realization.interferers[l].distance, -alpha);
  }

  SinrBreakdown out;
  out.noise_term = static_cast<double>(n_t) * config.noise_to_power();
  for (std::size_t m = 0; m < n_t; ++m) {
    const ComplexVector& v = bank.filters.at(m);
    const ComplexVector own = channels.direct.adjoint() * v;  // conj(v* H_00)
    const double signal = std::norm(own(static_cast<Eigen::Index>(m))) * own_path;
    double inter_stream = 0.0;
    for (std::size_t i = 0; i < n_t; ++i) {
      if (i == m) continue;
      if (bank.detector == Detector::zf_sic && i < m) continue;
      inter_stream += std::norm(own(static_cast<Eigen::Index>(i))) * own_path;
    }
    double cancelled = 0.0;
    double far = 0.0;
    for (std::size_t l = 0; l < channels.interferers.size(); ++l) {
      if (is_cancelled[l]) {
        if (bank.detector == Detector::zf) {
          cancelled += (channels.interferers[l].adjoint() * v).squaredNorm() * far_path[l];
        }
      } else if (l < in_window) {
        far += (channels.interferers[l].adjoint() * v).squaredNorm() * far_path[l];
      }
    }
    const double denominator = inter_stream + cancelled + far + out.noise_term;
    out.signal_power.push_back(signal);
    out.residual_inter_stream.push_back(inter_stream);
    out.cancelled_interference.push_back(cancelled);
    out.far_interference.push_back(far);
    out.per_stream_sinr.push_back(denominator > 0.0 ? signal / denominator
                                                    : std::numeric_limits<double>::infinity());
  }
  return out;
}

}  // namespace mimonet
