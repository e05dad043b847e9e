#pragma once

#include <functional>
#include <vector>

#include "qdswap/interference/wavepacket.hpp"

namespace qdswap {

enum class HomConfig { Parallel, Orthogonal };

/// Two-photon coincidence density between the two outputs of a balanced beam
/// splitter, as a function of the two detection times (ps). For orthogonal
/// polarizations the photons are distinguishable and the density is the
/// classical product combinatorics; for parallel polarizations the two-photon
/// interference term is subtracted, modulated by the detuning beat and the
/// wavepacket coherence overlap. Nonnegative everywhere; each configuration
/// integrates to the pairwise cross-port coincidence probability of 1/2.
class HomCoincidenceDensity {
 public:
  HomCoincidenceDensity(PhotonWavepacket wp1, PhotonWavepacket wp2, double detuning_ueV,
                        HomConfig config);

  double operator()(double t1_ps, double t2_ps) const;

  const PhotonWavepacket& wp1() const { return wp1_; }
  const PhotonWavepacket& wp2() const { return wp2_; }

 private:
  PhotonWavepacket wp1_, wp2_;
  HomConfig config_;
};

struct CoincidenceHistogram {
  double bin_width_ps = 2.0;
  std::vector<double> counts;  // expected counts per delay bin, symmetric around zero
  HomConfig config = HomConfig::Parallel;

  int n_bins() const { return static_cast<int>(counts.size()); }
  double delay_of_bin(int i) const {
    return (i - 0.5 * (n_bins() - 1)) * bin_width_ps;
  }
  double range_ps() const { return 0.5 * n_bins() * bin_width_ps; }
};

struct HomSimulationOptions {
  double jitter_sigma_ps = 0.0;   // per detector
  double bin_width_ps = 2.0;
  double range_ps = 400.0;        // histogram spans [-range, range]
  double noise_weight = 0.0;      // fraction of coincidences from multiphoton noise
  double total_counts = 1.0;      // overall scale of the expected histogram
};

/// Expected coincidence histogram versus detection-time difference. The
/// density is reduced along the sum coordinate by quadrature, convolved with
/// the two detectors' jitter, and integrated per bin. Multiphoton noise adds
/// an interference-free background with the same envelopes in both
/// polarization configurations.
CoincidenceHistogram simulate_hom_histogram(const PhotonWavepacket& wp1,
                                            const PhotonWavepacket& wp2, double detuning_ueV,
                                            HomConfig config, const HomSimulationOptions& opts);

/// V(dt) = 1 - C_par / C_orth with both counts integrated over [-dt, dt].
/// Throws when the orthogonal counts in the window vanish.
double hom_visibility(const CoincidenceHistogram& parallel, const CoincidenceHistogram& orthogonal,
                      double window_ps);

/// Setup-independent visibility: removes the beam-splitter imbalance by the
/// (R^2+T^2)/(2RT) factor and adds the summed g2(0) of the two interfering
/// sources, clamped to 1. Both corrections are anchored on measured
/// before/after visibility pairs rather than derived from the noise model.
double corrected_visibility(double v_raw, double g2_sum, double bs_imbalance);

}  // namespace qdswap
