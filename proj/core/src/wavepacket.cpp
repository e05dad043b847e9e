#include "qdswap/interference/wavepacket.hpp"

#include <cmath>

#include "qdswap/common/constants.hpp"
#include "qdswap/common/error.hpp"

namespace qdswap {

PhotonWavepacket PhotonWavepacket::x_photon(const QdSource& src, double central_energy_ueV,
                                            double dephasing_time_ps) {
  PhotonWavepacket wp;
  wp.central_energy_ueV = central_energy_ueV;
  wp.decay_ps = src.x_lifetime_ps;
  wp.onset_smear_ps = src.xx_lifetime_ps;  // X starts when the XX decays
  wp.coherence_cut_ps = 0.0;
  wp.dephasing_time_ps = dephasing_time_ps;
  return wp;
}

PhotonWavepacket PhotonWavepacket::xx_photon(const QdSource& src, double central_energy_ueV,
                                             double dephasing_time_ps) {
  PhotonWavepacket wp;
  wp.central_energy_ueV = central_energy_ueV;
  wp.decay_ps = src.xx_lifetime_ps;
  wp.onset_smear_ps = 0.0;  // XX starts at the pump pulse
  wp.coherence_cut_ps = src.x_lifetime_ps;  // phase memory ends at the X decay
  wp.dephasing_time_ps = dephasing_time_ps;
  return wp;
}

PhotonWavepacket PhotonWavepacket::for_transition(Transition t, const QdSource& src,
                                                  double central_energy_ueV,
                                                  double dephasing_time_ps) {
  return t == Transition::X ? x_photon(src, central_energy_ueV, dephasing_time_ps)
                            : xx_photon(src, central_energy_ueV, dephasing_time_ps);
}

void PhotonWavepacket::validate() const {
  if (decay_ps <= 0.0) throw_invalid("wavepacket decay time must be positive");
  if (onset_smear_ps < 0.0 || coherence_cut_ps < 0.0) {
    throw_invalid("wavepacket cascade timescales must be nonnegative");
  }
  if (!(dephasing_time_ps > 0.0)) throw_invalid("dephasing time must be positive");
}

double wavepacket_intensity(const PhotonWavepacket& wp, double t_ps) {
  return coherence_kernel(wp, t_ps, t_ps).real();
}

std::complex<double> coherence_kernel(const PhotonWavepacket& wp, double t_ps,
                                      double t_prime_ps) {
  const double x = t_ps - wp.origin_offset_ps;
  const double y = t_prime_ps - wp.origin_offset_ps;
  const double m = std::min(x, y);
  if (m < 0.0) return {0.0, 0.0};

  const double T = wp.decay_ps;
  double env = std::exp(-(x + y) / (2.0 * T)) / T;

  if (wp.onset_smear_ps > 0.0) {
    const double Tp = wp.onset_smear_ps;
    const double a = 1.0 / Tp - 1.0 / T;
    if (std::abs(a) * m < 1e-9) {
      env *= m / Tp;
    } else {
      env *= (1.0 - std::exp(-a * m)) / (a * Tp);
    }
  }

  const double adiff = std::abs(x - y);
  if (wp.coherence_cut_ps > 0.0) env *= std::exp(-adiff / (2.0 * wp.coherence_cut_ps));
  if (std::isfinite(wp.dephasing_time_ps)) env *= std::exp(-adiff / wp.dephasing_time_ps);

  const double phase = -wp.central_energy_ueV * (t_ps - t_prime_ps) / kHbarUeVPs;
  return std::polar(env, phase);
}

}  // namespace qdswap
