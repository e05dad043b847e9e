#pragma once

#include <complex>
#include <limits>

#include "qdswap/source/qd_source.hpp"

namespace qdswap {

/// Temporal-mode descriptor of one cascade photon.
///
/// The envelope is a one-sided exponential with the photon's own radiative
/// decay time. Two cascade effects shape the first-order coherence beyond the
/// bare exponential: the start of the envelope may be smeared by the preceding
/// transition's decay (the X photon starts at the XX decay time), and the
/// coherence may be cut by the following transition's decay (the XX photon
/// keeps phase memory only until the X decays). Pure dephasing from residual
/// charge noise enters as an exponential coherence factor with time constant
/// dephasing_time_ps.
struct PhotonWavepacket {
  double central_energy_ueV = 0.0;
  double decay_ps = 1.0;
  double origin_offset_ps = 0.0;
  double onset_smear_ps = 0.0;     // 0 = sharp turn-on at the origin
  double coherence_cut_ps = 0.0;   // 0 = no partner cut
  double dephasing_time_ps = std::numeric_limits<double>::infinity();

  static PhotonWavepacket x_photon(const QdSource& src, double central_energy_ueV,
                                   double dephasing_time_ps);
  static PhotonWavepacket xx_photon(const QdSource& src, double central_energy_ueV,
                                    double dephasing_time_ps);
  static PhotonWavepacket for_transition(Transition t, const QdSource& src,
                                         double central_energy_ueV, double dephasing_time_ps);

  void validate() const;
};

/// Intensity of the emission-time density at t; integrates to 1.
double wavepacket_intensity(const PhotonWavepacket& wp, double t_ps);

/// First-order coherence kernel F(t, t') of the photon, normalized so that
/// the diagonal integrates to 1. Includes the central-energy phase, the onset
/// smear, the partner coherence cut and pure dephasing.
std::complex<double> coherence_kernel(const PhotonWavepacket& wp, double t_ps, double t_prime_ps);

}  // namespace qdswap
