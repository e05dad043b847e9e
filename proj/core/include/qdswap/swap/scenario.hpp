#pragma once

#include <limits>
#include <vector>

#include "qdswap/interference/bsm.hpp"
#include "qdswap/source/qd_source.hpp"

namespace qdswap {

/// Scenario-level noise calibration. The white-noise weight of each source's
/// pair state is noise_floor_scale * g2_zero; its multiphoton share, which the
/// corrected fidelity curves remove, is 2 * g2_zero (either photon of the pair
/// may be replaced by a background photon). Pure dephasing times model
/// residual charge noise per transition.
struct NoiseModel {
  double dephasing_time_x_ps = std::numeric_limits<double>::infinity();
  double dephasing_time_xx_ps = std::numeric_limits<double>::infinity();
  double noise_floor_scale = 0.0;

  double dephasing_time_ps(Transition t) const {
    return t == Transition::X ? dephasing_time_x_ps : dephasing_time_xx_ps;
  }
};

/// One entanglement-swapping configuration: two sources, the interfering
/// transition, the station, and the strain field applied to source 2 while
/// source 1 is held fixed.
struct SwapScenario {
  QdSource source1;
  QdSource source2;
  Transition bsm_photon = Transition::X;  // the interfering pair
  BsmStation station;
  double field_kV_cm = 0.0;
  ActuatorRange actuator;
  std::vector<double> windows_ps;  // ascending; infinity = no post-selection
  double effective_rep_rate_MHz = 160.0;
  double resonance_tolerance_ueV = 1.0;
  NoiseModel noise;
  double pair_generation = 0.9;  // pair creation probability per pulse, per source

  Transition kept_photon() const {
    return bsm_photon == Transition::X ? Transition::XX : Transition::X;
  }

  /// Tuned energy of the interfering transition, source 2 minus source 1
  /// (source 1 sees zero field).
  double bsm_detuning_ueV() const;

  bool is_detuned() const;

  void validate() const;
};

}  // namespace qdswap
