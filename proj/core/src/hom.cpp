#include "qdswap/interference/hom.hpp"
#include <algorithm>
#include <array>

#include <cmath>

#include "qdswap/common/constants.hpp"
#include "qdswap/common/error.hpp"
#include "qdswap/common/quadrature.hpp"

namespace qdswap {

namespace {

double product_part(const PhotonWavepacket& w1, const PhotonWavepacket& w2, double t1, double t2) {
  return 0.25 * (wavepacket_intensity(w1, t1) * wavepacket_intensity(w2, t2) +
                 wavepacket_intensity(w1, t2) * wavepacket_intensity(w2, t1));
}

double interference_part(const PhotonWavepacket& w1, const PhotonWavepacket& w2, double detuning,
                         double t1, double t2) {
  // The kernels already carry their central-energy phases; the detuning
  // argument shifts wavepacket 2.
  PhotonWavepacket w2s = w2;
  w2s.central_energy_ueV += detuning;
  const std::complex<double> cross =
      coherence_kernel(w1, t1, t2) * coherence_kernel(w2s, t2, t1);
  return 0.5 * cross.real();
}

}  // namespace

HomCoincidenceDensity::HomCoincidenceDensity(PhotonWavepacket wp1, PhotonWavepacket wp2,
                                             double detuning_ueV, HomConfig config)
    : wp1_(std::move(wp1)), wp2_(std::move(wp2)), config_(config) {
  wp1_.validate();
  wp2_.validate();
  wp2_.central_energy_ueV += detuning_ueV;
}

double HomCoincidenceDensity::operator()(double t1_ps, double t2_ps) const {
  double density = product_part(wp1_, wp2_, t1_ps, t2_ps);
  if (config_ == HomConfig::Parallel) {
    density -= interference_part(wp1_, wp2_, 0.0, t1_ps, t2_ps);
  }
  return std::max(0.0, density);
}

CoincidenceHistogram simulate_hom_histogram(const PhotonWavepacket& wp1,
                                            const PhotonWavepacket& wp2, double detuning_ueV,
                                            HomConfig config, const HomSimulationOptions& opts) {
  if (opts.bin_width_ps <= 0.0 || opts.range_ps <= 0.0) {
    throw_invalid("histogram bin width and range must be positive");
  }
  PhotonWavepacket w2 = wp2;
  w2.central_energy_ueV += detuning_ueV;

  // Reduce the 2D density along the sum coordinate for a given time
  // difference. The integrand decays on the photon-lifetime scale but has
  // kinks where either envelope turns on, so those become panel breakpoints.
  const double scale = wp1.decay_ps + wp1.onset_smear_ps + w2.decay_ps + w2.onset_smear_ps;
  auto reduced = [&](double delta, bool with_interference) {
    auto along_sum = [&](double mean) -> std::complex<double> {
      const double t1 = mean + 0.5 * delta;
      const double t2 = mean - 0.5 * delta;
      double value = product_part(wp1, w2, t1, t2);
      if (with_interference) {
        value = std::max(0.0, value - interference_part(wp1, w2, 0.0, t1, t2));
      }
      return {value, 0.0};
    };
    // Envelope turn-ons in the mean coordinate, for both time assignments.
    std::array<double, 4> kinks = {wp1.origin_offset_ps - 0.5 * delta,
                                   wp1.origin_offset_ps + 0.5 * delta,
                                   w2.origin_offset_ps - 0.5 * delta,
                                   w2.origin_offset_ps + 0.5 * delta};
    std::sort(kinks.begin(), kinks.end());
    double total = 0.0;
    for (int i = 0; i + 1 < 4; ++i) {
      if (kinks[i + 1] > kinks[i]) {
        total += integrate_adaptive(along_sum, kinks[i], kinks[i + 1], 1e-12).real();
      }
    }
    total += integrate_decaying(along_sum, kinks[3], scale, 1e-12).real();
    return total;
  };

  const int n_bins = std::max(1, static_cast<int>(std::round(2.0 * opts.range_ps /
                                                             opts.bin_width_ps)));
  // Sample the reduced density on a fine grid, then convolve with the jitter
  // of the two detectors (difference smearing sigma*sqrt(2)) and bin.
  const double grid_step = std::min(opts.bin_width_ps / 4.0, 1.0);
  const double s = opts.jitter_sigma_ps * std::sqrt(2.0);
  const double pad = 8.0 * s + 4.0 * grid_step;
  const int n_grid = static_cast<int>(std::ceil((2.0 * (opts.range_ps + pad)) / grid_step)) + 1;
  const double grid_lo = -(opts.range_ps + pad);

  // With multiphoton noise a fraction of the pairs does not interfere at all;
  // the background has the same time structure in both configurations.
  std::vector<double> raw(n_grid);
  for (int i = 0; i < n_grid; ++i) {
    const double delta = grid_lo + i * grid_step;
    const bool interfere = (config == HomConfig::Parallel);
    const double coherent = reduced(delta, interfere);
    if (opts.noise_weight > 0.0) {
      raw[i] = (1.0 - opts.noise_weight) * coherent + opts.noise_weight * reduced(delta, false);
    } else {
      raw[i] = coherent;
    }
  }

  std::vector<double> smeared;
  if (s > 0.0) {
    const int half = static_cast<int>(std::ceil(6.0 * s / grid_step));
    std::vector<double> kernel(2 * half + 1);
    double ksum = 0.0;
    for (int k = -half; k <= half; ++k) {
      const double v = std::exp(-0.5 * (k * grid_step) * (k * grid_step) / (s * s));
      kernel[k + half] = v;
      ksum += v;
    }
    for (auto& v : kernel) v /= ksum;
    smeared.assign(n_grid, 0.0);
    for (int i = 0; i < n_grid; ++i) {
      double acc = 0.0;
      for (int k = -half; k <= half; ++k) {
        const int j = i + k;
        if (j >= 0 && j < n_grid) acc += raw[j] * kernel[k + half];
      }
      smeared[i] = acc;
    }
  } else {
    smeared = std::move(raw);
  }

  CoincidenceHistogram hist;
  hist.bin_width_ps = opts.bin_width_ps;
  hist.config = config;
  hist.counts.assign(n_bins, 0.0);
  for (int b = 0; b < n_bins; ++b) {
    const double lo = -opts.range_ps + b * opts.bin_width_ps;
    const double hi = lo + opts.bin_width_ps;
    double acc = 0.0;
    for (int i = 0; i < n_grid; ++i) {
      const double delta = grid_lo + i * grid_step;
      if (delta >= lo && delta < hi) acc += smeared[i] * grid_step;
    }
    hist.counts[b] = acc * opts.total_counts;
  }
  return hist;
}

double hom_visibility(const CoincidenceHistogram& parallel,
                      const CoincidenceHistogram& orthogonal, double window_ps) {
  if (parallel.n_bins() != orthogonal.n_bins() ||
      parallel.bin_width_ps != orthogonal.bin_width_ps) {
    throw_invalid("histograms must share binning");
  }
  if (window_ps < parallel.bin_width_ps) {
    throw_invalid("post-selection window must be at least one bin wide");
  }
  double c_par = 0.0;
  double c_orth = 0.0;
  for (int i = 0; i < parallel.n_bins(); ++i) {
    const double d = parallel.delay_of_bin(i);
    if (std::abs(d) <= window_ps) {
      c_par += parallel.counts[i];
      c_orth += orthogonal.counts[i];
    }
  }
  if (c_orth <= 0.0) {
    throw_physics("undefined visibility: no orthogonal coincidences in the window");
  }
  return 1.0 - c_par / c_orth;
}

double corrected_visibility(double v_raw, double g2_sum, double bs_imbalance) {
  if (g2_sum < 0.0 || g2_sum >= 1.0) throw_invalid("g2 sum must lie in [0, 1)");
  if (bs_imbalance < 0.0 || bs_imbalance >= 0.5) {
    throw_invalid("beam-splitter imbalance must lie in [0, 0.5)");
  }
  const double r = 0.5 + bs_imbalance;
  const double t = 1.0 - r;
  const double bs_factor = (r * r + t * t) / (2.0 * r * t);
  return std::min(1.0, v_raw * bs_factor + g2_sum);
}

}  // namespace qdswap
