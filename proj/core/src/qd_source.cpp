#include "qdswap/source/qd_source.hpp"

#include <cmath>

#include "qdswap/common/constants.hpp"
#include "qdswap/common/error.hpp"

namespace qdswap {

std::string_view to_string(Transition t) { return t == Transition::X ? "X" : "XX"; }

void QdSource::validate() const {
  if (x_lifetime_ps <= 0.0 || xx_lifetime_ps <= 0.0) throw_invalid("lifetimes must be positive");
  if (fss_ueV < 0.0) throw_invalid("fss must be nonnegative");
  if (g2_zero < 0.0 || g2_zero >= 1.0) throw_invalid("g2_zero must lie in [0, 1)");
  if (blinking_on_fraction <= 0.0 || blinking_on_fraction > 1.0) {
    throw_invalid("blinking_on_fraction must lie in (0, 1]");
  }
  for (double eff : {end_to_end_efficiency_x, end_to_end_efficiency_xx}) {
    if (eff <= 0.0 || eff > 1.0) throw_invalid("efficiencies must lie in (0, 1]");
  }
}

PureState2Q cascade_state(const QdSource& source, double tau_ps) {
  if (tau_ps < 0.0) throw_invalid("cascade delay tau must be nonnegative");
  const double phi = source.fss_ueV * tau_ps / kHbarUeVPs;
  Vector4c v = Vector4c::Zero();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  v(0) = inv_sqrt2;
  v(3) = inv_sqrt2 * Complex(std::cos(phi), std::sin(phi));
  return PureState2Q::make(v);
}

double source_noise_weight(const QdSource& source, double noise_floor_scale) {
  if (noise_floor_scale < 0.0) throw_invalid("noise_floor_scale must be nonnegative");
  return std::min(1.0, noise_floor_scale * source.g2_zero);
}

DensityMatrix2Q time_averaged_pair_dm(const QdSource& source, double noise_floor_scale) {
  source.validate();
  // Integral of exp(i S tau / hbar) against the X-delay density
  // exp(-tau/T_X)/T_X gives 1 / (1 - i x) with x = S T_X / hbar.
  const double x = source.fss_ueV * source.x_lifetime_ps / kHbarUeVPs;
  const Complex coherence = 0.5 / Complex(1.0, -x);

  Matrix4c m = Matrix4c::Zero();
  m(0, 0) = 0.5;
  m(3, 3) = 0.5;
  m(0, 3) = std::conj(coherence);
  m(3, 0) = coherence;

  const double eps = source_noise_weight(source, noise_floor_scale);
  m = (1.0 - eps) * m + eps * 0.25 * Matrix4c::Identity();
  return DensityMatrix2Q::make(m);
}

TunedEnergies tuned_energies(const QdSource& source, double field_kV_cm,
                             const ActuatorRange& range) {
  if (!range.contains(field_kV_cm)) {
    throw_physics("requested strain field is outside the actuator range");
  }
  return {source.x_energy_ueV + source.tuning_slope_x * field_kV_cm,
          source.xx_energy_ueV + source.tuning_slope_xx * field_kV_cm};
}

double find_resonance_field(const QdSource& fixed, const QdSource& tuned, Transition transition,
                            const ActuatorRange& range) {
  const double slope = tuned.tuning_slope(transition);
  if (slope == 0.0) throw_physics("tuned source has zero tuning slope for this transition");
  const double detuning = tuned.energy_at_zero_field(transition) -
                          fixed.energy_at_zero_field(transition);
  const double field = -detuning / slope;
  if (!range.contains(field)) {
    throw_physics("untunable pair: resonance field outside the actuator range");
  }
  return field;
}

}  // namespace qdswap
