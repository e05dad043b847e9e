#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qdswap/quantum/two_qubit.hpp"

namespace qdswap {

enum class BsPort { One = 0, Two = 1 };
enum class Pol { H = 0, V = 1 };

inline Pol other(Pol p) { return p == Pol::H ? Pol::V : Pol::H; }

/// One polarizing-beam-splitter output channel behind the interference BS.
struct DetectionChannel {
  BsPort port;
  Pol pol;
  bool operator==(const DetectionChannel&) const = default;
};

struct Detection {
  char detector;   // 'A'..'D'
  double time_ps;
};

/// Polarization-selective Bell-state measurement station: one beam splitter,
/// two polarizing beam splitters, four detectors with Gaussian timing jitter.
///
/// Default detector assignment: A and C sit on the first PBS (H and V output),
/// D and B on the second (H and V output). With this layout a coincidence
/// between orthogonal outputs of different PBSs (AB or CD) heralds PsiMinus
/// and a coincidence between the two outputs of one PBS (AC or BD) heralds
/// PsiPlus; same-polarization patterns (AD, BC) herald nothing.
struct BsmStation {
  double bs_reflectivity = 0.5;
  double pbs_extinction = 0.0;       // probability of a photon leaking to the wrong PBS output
  double detector_jitter_sigma_ps = 0.0;  // per detector

  std::array<DetectionChannel, 4> detectors = {
      DetectionChannel{BsPort::One, Pol::H},   // A
      DetectionChannel{BsPort::Two, Pol::V},   // B
      DetectionChannel{BsPort::One, Pol::V},   // C
      DetectionChannel{BsPort::Two, Pol::H},   // D
  };

  /// Unordered detector-index pairs heralding each Bell state.
  std::vector<std::array<int, 2>> psi_minus_patterns = {{0, 1}, {2, 3}};  // AB, CD
  std::vector<std::array<int, 2>> psi_plus_patterns = {{0, 2}, {1, 3}};   // AC, BD

  static BsmStation ideal();

  /// Checks ranges and that every heralding pattern pairs one H output with
  /// one V output (the projections onto Psi+- both require that).
  void validate() const;

  int detector_index(char label) const;  // throws on unknown label
  std::optional<BellLabel> classify_pattern(int det_a, int det_b) const;
};

/// Classifies a detection record: exactly two detections forming a heralding
/// pattern within |t_i - t_j| <= window yield the pattern's Bell label;
/// anything else (wrong pattern, window violation, <2 or >2 detections) is no
/// herald. Unknown detector labels are an error.
std::optional<BellLabel> bsm_herald(const BsmStation& station,
                                    const std::vector<Detection>& detections, double window_ps);

/// Adds independent Gaussian timing offsets of the given standard deviation;
/// deterministic for a given seed.
std::vector<double> apply_jitter(const std::vector<double>& times_ps, double sigma_ps,
                                 std::uint64_t seed);

}  // namespace qdswap
