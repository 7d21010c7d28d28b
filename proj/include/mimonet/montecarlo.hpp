#pragma once

// Ergodic spectral efficiency by joint averaging over topology and fading.
// Each realization index owns its seeds, so the estimate is identical for any
// number of workers.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "mimonet/channel.hpp"
#include "mimonet/config.hpp"
#include "mimonet/detection.hpp"
#include "mimonet/error.hpp"
#include "mimonet/geometry.hpp"
#include "mimonet/rng.hpp"
#include "mimonet/stats.hpp"

namespace mimonet {

struct SpectralEfficiencyEstimate {
  double per_link_mean = 0.0;  // bits/s/Hz
  double per_area_mean = 0.0;  // bits/s/Hz/m^2
  double std_error = 0.0;      // of per_link_mean
  std::size_t n_realizations = 0;
  std::vector<double> per_stream_breakdown;  // mean log2(1 + SINR(m)) per stream
  std::size_t rejected_realizations = 0;     // interference-limited draws without interferers
};

struct PartialEstimate {
  std::size_t completed = 0;
  std::size_t total = 0;
  double running_mean = 0.0;
};

struct MonteCarloOptions {
  double window_radius = 500.0;
  unsigned workers = 1;
  std::size_t block_size = 2048;
  std::function<void(const PartialEstimate&)> progress;  // called from one thread at a time
};

namespace detail {

inline constexpr std::uint64_t network_stream = 0;
inline constexpr std::uint64_t channel_stream = 1;
inline constexpr std::uint64_t resample_stream_base = 2;
inline constexpr int max_resamples = 1000;

struct RealizationOutcome {
  double rate = 0.0;
  std::vector<double> per_stream;
  std::size_t rejections = 0;
};

inline RealizationOutcome simulate_realization(const SystemConfig& config, Detector detector,
                                               double window_radius, std::uint64_t master, std::uint64_t index) {
  const auto cancelled = static_cast<std::size_t>(config.effective_l());
  RealizationOutcome outcome;
  std::uint64_t net_seed = derive_seed(master, index, network_stream);
  std::uint64_t chan_seed = derive_seed(master, index, channel_stream);
  NetworkRealization net = sample_network(config, window_radius, net_seed, cancelled);
  // Without noise a receiver that hears nobody has infinite SINR; the integrals
  // describe an infinite network where that never happens, so redraw.
  while (config.interference_limited && net.in_window_count() <= cancelled) {
    require(outcome.rejections < max_resamples, ErrorKind::invalid_config,
            "interference-limited run keeps drawing empty windows; enlarge window_radius or lambda");
    const std::uint64_t stream = resample_stream_base + 2 * outcome.rejections;
    net_seed = derive_seed(master, index, stream);
    chan_seed = derive_seed(master, index, stream + 1);
    net = sample_network(config, window_radius, net_seed, cancelled);
    ++outcome.rejections;
  }
  const ChannelSet channels = sample_channels(net, config.n_r, chan_seed);
  const FilterBank bank = build_filters(channels, detector, cancelled);
  const SinrBreakdown sinr = compute_sinr(bank, channels, net, config);
  for (double s : sinr.per_stream_sinr) {
    const double r = std::log2(1.0 + s);
    outcome.per_stream.push_back(r);
    outcome.rate += r;
  }
  return outcome;
}

}  // namespace detail

inline SpectralEfficiencyEstimate estimate(const SystemConfig& config, Detector detector, std::size_t n_realizations,
                                           std::uint64_t master_seed, const MonteCarloOptions& options = {}) {
  config.validate();
  require(n_realizations >= 1, ErrorKind::invalid_config, "n_realizations must be at least 1");
  require(options.window_radius > config.r_d, ErrorKind::invalid_config, "window_radius must exceed r_d");

  std::vector<double> rates(n_realizations, 0.0);
  std::vector<std::vector<double>> streams(n_realizations);
  std::vector<std::size_t> rejections(n_realizations, 0);

  const std::size_t block = std::max<std::size_t>(1, options.block_size);
  const std::size_t n_blocks = (n_realizations + block - 1) / block;
  std::atomic<std::size_t> next_block{0};
  std::mutex progress_mutex;
  double finished_sum = 0.0;
  std::size_t finished_count = 0;
  std::mutex error_mutex;
  std::exception_ptr failure;

  auto worker = [&] {
    while (true) {
      const std::size_t b = next_block.fetch_add(1);
      if (b >= n_blocks) return;
      {
        std::lock_guard lock(error_mutex);
        if (failure) return;
      }
      const std::size_t begin = b * block;
      const std::size_t end = std::min(n_realizations, begin + block);
      try {
        for (std::size_t i = begin; i < end; ++i) {
          auto outcome = detail::simulate_realization(config, detector, options.window_radius, master_seed, i);
          rates[i] = outcome.rate;
          streams[i] = std::move(outcome.per_stream);
          rejections[i] = outcome.rejections;
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
      if (options.progress) {
        // The running mean covers whichever blocks have finished; only the
        // final reduction below is ordered.
        double sum = 0.0;
        for (std::size_t i = begin; i < end; ++i) sum += rates[i];
        std::lock_guard lock(progress_mutex);
        finished_sum += sum;
        finished_count += end - begin;
        options.progress({finished_count, n_realizations, finished_sum / static_cast<double>(finished_count)});
      }
    }
  };

  const unsigned n_workers = std::max(1u, options.workers);
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  const stats::Summary summary = stats::summarize(rates);
  SpectralEfficiencyEstimate est;
  est.per_link_mean = summary.mean;
  est.per_area_mean = config.lambda * summary.mean;
  est.std_error = summary.std_error;
  est.n_realizations = n_realizations;
  const std::size_t n_streams = streams.front().size();
  est.per_stream_breakdown.assign(n_streams, 0.0);
  for (const auto& s : streams) {
    for (std::size_t m = 0; m < n_streams && m < s.size(); ++m) est.per_stream_breakdown[m] += s[m];
  }
  for (double& v : est.per_stream_breakdown) v /= static_cast<double>(n_realizations);
  for (std::size_t r : rejections) est.rejected_realizations += r;
  return est;
}

struct FadingLawSummary {
  double mean = 0.0;
  double variance = 0.0;
  int dof_half = 0;  // n of the Gamma(n, 1) law, i.e. half the chi-squared dof
  stats::KsResult ks;
  std::vector<double> samples;
};

/// Signal fading |v(m)* h_m|^2 at the filter output for `stream` (0-based),
/// tested against the Gamma(n, 1) law the analysis assigns to it.
inline FadingLawSummary estimate_fading_law(const SystemConfig& config, Detector detector, std::size_t stream,
                                            std::size_t n_samples, std::uint64_t master_seed = 1) {
  const int n_t = config.require_fixed_n_t("fading-law estimation");
  const int l = config.effective_l();
  require(stream < static_cast<std::size_t>(n_t), ErrorKind::domain, "stream index out of range");
  FadingLawSummary out;
  out.dof_half = detector == Detector::zf ? config.n_r - n_t - l * n_t + 1
                                          : config.n_r - n_t + static_cast<int>(stream) + 1;
  require(out.dof_half >= 1, ErrorKind::insufficient_dof, "configuration leaves no receive dimensions");

  // Only the channels matter; interferers at fixed distances supply the L
  // matrices to null.
  NetworkRealization net;
  net.typical_n_t = n_t;
  net.window_radius = 1.0;
  for (int j = 0; j < l; ++j) net.interferers.push_back({1.0, n_t});
  out.samples.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const ChannelSet channels = sample_channels(net, config.n_r, derive_seed(master_seed, i, detail::channel_stream));
    const FilterBank bank = build_filters(channels, detector, static_cast<std::size_t>(l));
    const auto idx = static_cast<Eigen::Index>(stream);
    out.samples.push_back(std::norm(bank.filters[stream].dot(channels.direct.col(idx))));
  }
  const stats::Summary s = stats::summarize(out.samples);
  out.mean = s.mean;
  out.variance = s.variance;
  const int n = out.dof_half;
  out.ks = stats::ks_test(out.samples, [n](double x) { return stats::gamma_cdf_integer(n, x); });
  return out;
}

}  // namespace mimonet
