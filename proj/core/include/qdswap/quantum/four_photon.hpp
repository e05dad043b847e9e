#pragma once

#include <array>
#include <vector>

#include "qdswap/quantum/two_qubit.hpp"

namespace qdswap {

using Vector16c = Eigen::Matrix<Complex, 16, 1>;

/// Four-photon polarization pure state. Basis index for polarizations
/// (p1, p2, p3, p4), each 0 = H / 1 = V, is 8*p1 + 4*p2 + 2*p3 + p4.
class PureState4Q {
 public:
  static PureState4Q make(const Vector16c& amplitudes);
  static PureState4Q normalized(const Vector16c& amplitudes);

  /// |bell_ab>_{ab} (x) |bell_cd>_{cd} placed on photons (a,b) and (c,d).
  static PureState4Q product_of_bells(BellLabel ab, std::array<int, 2> photons_ab,
                                      BellLabel cd, std::array<int, 2> photons_cd);

  const Vector16c& amplitudes() const { return amp_; }

 private:
  explicit PureState4Q(Vector16c amp) : amp_(std::move(amp)) {}
  Vector16c amp_;
};

/// A split of the four photons {0,1,2,3} into two ordered pairs.
struct PairCut {
  std::array<int, 2> first;
  std::array<int, 2> second;

  /// Throws if any photon index is out of range or reused.
  void validate() const;
};

struct BellBellCoefficient {
  BellLabel first;   // Bell label on cut.first
  BellLabel second;  // Bell label on cut.second
  Complex amplitude;
};

/// All 16 coefficients of the state in the Bell (x) Bell basis for the given
/// pairing, ordered by (first label, second label) in enum order. The squared
/// magnitudes sum to 1 for a normalized input.
std::vector<BellBellCoefficient> bell_decompose_4q(const PureState4Q& state, const PairCut& cut);

/// Rebuild the four-photon state from its Bell (x) Bell coefficients (the
/// inverse of bell_decompose_4q for the same cut).
PureState4Q bell_recompose_4q(const std::vector<BellBellCoefficient>& coeffs, const PairCut& cut);

struct ProjectionResult {
  Vector4c conditional;  // unnormalized state of the remaining pair, ascending photon order
  double weight;         // squared norm before renormalization
};

/// Project photons (i, j) of the state onto the given two-qubit state; returns
/// the conditional (unnormalized) state of the two remaining photons, ordered
/// by ascending photon index, and the projection probability.
ProjectionResult partial_projection(const PureState4Q& state, std::array<int, 2> photons,
                                    const PureState2Q& projector);

}  // namespace qdswap
