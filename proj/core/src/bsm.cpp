#include "qdswap/interference/bsm.hpp"

#include <cmath>

#include "qdswap/common/error.hpp"
#include "qdswap/common/rng.hpp"

namespace qdswap {

BsmStation BsmStation::ideal() { return BsmStation{}; }

void BsmStation::validate() const {
  if (bs_reflectivity <= 0.0 || bs_reflectivity >= 1.0) {
    throw_invalid("bs_reflectivity must lie strictly between 0 and 1");
  }
  if (pbs_extinction < 0.0 || pbs_extinction > 0.5) {
    throw_invalid("pbs_extinction must lie in [0, 0.5]");
  }
  if (detector_jitter_sigma_ps < 0.0) throw_invalid("detector jitter must be nonnegative");

  auto check_patterns = [this](const std::vector<std::array<int, 2>>& patterns,
                               const char* which) {
    for (const auto& p : patterns) {
      if (p[0] < 0 || p[0] > 3 || p[1] < 0 || p[1] > 3 || p[0] == p[1]) {
        throw_invalid(std::string("invalid detector pair in ") + which);
      }
      if (detectors[p[0]].pol == detectors[p[1]].pol) {
        throw_invalid(std::string("herald pattern in ") + which +
                      " pairs two same-polarization outputs");
      }
    }
  };
  check_patterns(psi_minus_patterns, "psi_minus_patterns");
  check_patterns(psi_plus_patterns, "psi_plus_patterns");
  for (const auto& pm : psi_minus_patterns) {
    for (const auto& pp : psi_plus_patterns) {
      if ((pm[0] == pp[0] && pm[1] == pp[1]) || (pm[0] == pp[1] && pm[1] == pp[0])) {
        throw_invalid("a detector pattern is assigned to both Bell heralds");
      }
    }
  }
}

int BsmStation::detector_index(char label) const {
  if (label < 'A' || label > 'D') {
    throw_invalid(std::string("unknown detector label '") + label + "'");
  }
  return label - 'A';
}

std::optional<BellLabel> BsmStation::classify_pattern(int det_a, int det_b) const {
  auto matches = [det_a, det_b](const std::array<int, 2>& p) {
    return (p[0] == det_a && p[1] == det_b) || (p[0] == det_b && p[1] == det_a);
  };
  for (const auto& p : psi_minus_patterns) {
    if (matches(p)) return BellLabel::PsiMinus;
  }
  for (const auto& p : psi_plus_patterns) {
    if (matches(p)) return BellLabel::PsiPlus;
  }
  return std::nullopt;
}

std::optional<BellLabel> bsm_herald(const BsmStation& station,
                                    const std::vector<Detection>& detections, double window_ps) {
  if (window_ps < 0.0) throw_invalid("herald window must be nonnegative");
  for (const auto& d : detections) station.detector_index(d.detector);  // label check
  if (detections.size() != 2) return std::nullopt;

  const int a = station.detector_index(detections[0].detector);
  const int b = station.detector_index(detections[1].detector);
  if (a == b) return std::nullopt;
  if (std::abs(detections[0].time_ps - detections[1].time_ps) > window_ps) return std::nullopt;
  return station.classify_pattern(a, b);
}

std::vector<double> apply_jitter(const std::vector<double>& times_ps, double sigma_ps,
                                 std::uint64_t seed) {
  if (sigma_ps < 0.0) throw_invalid("jitter sigma must be nonnegative");
  std::vector<double> out = times_ps;
  if (sigma_ps == 0.0) return out;
  Rng rng(seed);
  for (auto& t : out) t += sigma_ps * rng.normal();
  return out;
}

}  // namespace qdswap
