#pragma once

#include "qdswap/quantum/two_qubit.hpp"

namespace qdswap {

enum class Transition { X, XX };

std::string_view to_string(Transition t);

/// Physical parameters of one GaAs-dot XX-X cascade source. Energies are
/// offsets (ueV) from a common per-transition reference, so only differences
/// between the two sources are meaningful.
struct QdSource {
  double x_energy_ueV = 0.0;      // X transition energy at zero actuator field
  double xx_energy_ueV = 0.0;     // XX transition energy at zero actuator field
  double tuning_slope_x = 0.0;    // ueV per (kV/cm)
  double tuning_slope_xx = 0.0;   // ueV per (kV/cm)
  double x_lifetime_ps = 25.0;
  double xx_lifetime_ps = 16.0;
  double fss_ueV = 0.0;           // fine-structure splitting S of the exciton doublet
  double purcell_x = 1.0;         // informational only
  double purcell_xx = 1.0;        // informational only
  double g2_zero = 0.0;           // multiphoton emission probability, in [0, 1)
  double blinking_on_fraction = 1.0;  // in (0, 1]
  double end_to_end_efficiency_x = 1.0;
  double end_to_end_efficiency_xx = 1.0;

  /// Throws on out-of-range parameters (lifetimes, efficiencies, g2, fss).
  void validate() const;

  double lifetime_ps(Transition t) const {
    return t == Transition::X ? x_lifetime_ps : xx_lifetime_ps;
  }
  double energy_at_zero_field(Transition t) const {
    return t == Transition::X ? x_energy_ueV : xx_energy_ueV;
  }
  double tuning_slope(Transition t) const {
    return t == Transition::X ? tuning_slope_x : tuning_slope_xx;
  }
  double efficiency(Transition t) const {
    return t == Transition::X ? end_to_end_efficiency_x : end_to_end_efficiency_xx;
  }
};

/// Actuator limits for the strain field, kV/cm.
struct ActuatorRange {
  double min_kV_cm = -25.0;
  double max_kV_cm = 13.75;

  bool contains(double field) const { return field >= min_kV_cm && field <= max_kV_cm; }
};

/// Polarization state of the XX-X pair conditioned on the X photon being
/// emitted a delay tau (ps) after the XX photon:
/// (|HH> + exp(i S tau / hbar) |VV>) / sqrt2. Throws on negative tau.
PureState2Q cascade_state(const QdSource& source, double tau_ps);

/// Pair density matrix averaged over the exponential X-delay distribution, in
/// closed form: the HH-VV coherence is 0.5 / (1 - i S T_X / hbar). On top of
/// the precession average an incoherent white-noise admixture
/// rho -> (1-eps) rho + eps I/4 models multiphoton and residual source noise,
/// with eps = noise_floor_scale * g2_zero (clamped to [0, 1]).
DensityMatrix2Q time_averaged_pair_dm(const QdSource& source, double noise_floor_scale = 0.0);

/// White-noise admixture weight used by time_averaged_pair_dm and the swap
/// engine for a given source.
double source_noise_weight(const QdSource& source, double noise_floor_scale);

struct TunedEnergies {
  double x_ueV;
  double xx_ueV;
};

/// Linear strain-tuning map energy(F) = energy(0) + slope * F for both
/// transitions. Throws if the field is outside the actuator range.
TunedEnergies tuned_energies(const QdSource& source, double field_kV_cm,
                             const ActuatorRange& range);

/// Field (applied to `tuned`, with `fixed` held at zero field) that nulls the
/// energy difference of the chosen transition. Throws "untunable pair" if the
/// root lies outside the actuator range or the slope vanishes.
double find_resonance_field(const QdSource& fixed, const QdSource& tuned, Transition transition,
                            const ActuatorRange& range);

}  // namespace qdswap
