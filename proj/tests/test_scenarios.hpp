#pragma once

#include <limits>

#include "qdswap/swap/scenario.hpp"

namespace qdswap::testing {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Two identical sources already in resonance, ideal station, no noise.
inline SwapScenario ideal_scenario(Transition bsm = Transition::X) {
  SwapScenario sc;
  sc.source1.x_lifetime_ps = 25.0;
  sc.source1.xx_lifetime_ps = 16.0;
  sc.source1.fss_ueV = 0.0;
  sc.source2 = sc.source1;
  sc.bsm_photon = bsm;
  sc.station = BsmStation::ideal();
  sc.station.detector_jitter_sigma_ps = 0.0;
  sc.field_kV_cm = 0.0;
  sc.windows_ps = {20.0, kInf};
  return sc;
}

/// Imperfect device-like scenario used by the oracle cross-checks.
inline SwapScenario noisy_scenario(Transition bsm, double fss1, double fss2,
                                   double dephasing_ps) {
  SwapScenario sc = ideal_scenario(bsm);
  sc.source1.fss_ueV = fss1;
  sc.source2.fss_ueV = fss2;
  sc.source1.g2_zero = 0.025;
  sc.source2.g2_zero = 0.025;
  sc.noise.noise_floor_scale = 4.0;
  sc.noise.dephasing_time_x_ps = dephasing_ps;
  sc.noise.dephasing_time_xx_ps = dephasing_ps;
  sc.station.detector_jitter_sigma_ps = 6.37;
  return sc;
}

}  // namespace qdswap::testing
