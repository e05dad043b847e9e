#include "qdswap/swap/scenario.hpp"

#include <cmath>

#include "qdswap/common/error.hpp"

namespace qdswap {

double SwapScenario::bsm_detuning_ueV() const {
  const TunedEnergies e1 = tuned_energies(source1, 0.0, actuator);
  const TunedEnergies e2 = tuned_energies(source2, field_kV_cm, actuator);
  const double v1 = bsm_photon == Transition::X ? e1.x_ueV : e1.xx_ueV;
  const double v2 = bsm_photon == Transition::X ? e2.x_ueV : e2.xx_ueV;
  return v2 - v1;
}

bool SwapScenario::is_detuned() const {
  return std::abs(bsm_detuning_ueV()) > resonance_tolerance_ueV;
}

void SwapScenario::validate() const {
  source1.validate();
  source2.validate();
  station.validate();
  if (!actuator.contains(field_kV_cm)) {
    throw_physics("scenario field lies outside the actuator range");
  }
  if (windows_ps.empty()) throw_invalid("scenario needs at least one post-selection window");
  for (size_t i = 0; i < windows_ps.size(); ++i) {
    if (windows_ps[i] < 0.0) throw_invalid("windows must be nonnegative");
    if (i > 0 && windows_ps[i] <= windows_ps[i - 1]) {
      throw_invalid("windows must be strictly ascending");
    }
  }
  if (effective_rep_rate_MHz <= 0.0) throw_invalid("repetition rate must be positive");
  if (resonance_tolerance_ueV <= 0.0) throw_invalid("resonance tolerance must be positive");
  if (pair_generation <= 0.0 || pair_generation > 1.0) {
    throw_invalid("pair_generation must lie in (0, 1]");
  }
  if (noise.noise_floor_scale < 0.0) throw_invalid("noise_floor_scale must be nonnegative");
}

}  // namespace qdswap
