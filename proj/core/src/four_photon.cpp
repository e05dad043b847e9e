#include "qdswap/quantum/four_photon.hpp"

#include <cmath>

#include "qdswap/common/error.hpp"

namespace qdswap {

namespace {

constexpr double kNormTol = 1e-12;

int bit_of(int index, int photon) { return (index >> (3 - photon)) & 1; }

/// Sixteen-dimensional vector for |bell>_{pair} placed on the given photons,
/// tensored with basis state (r0, r1) on the remaining photons in ascending
/// order. Used to build projection bras.
Vector16c embed_pair_state(const Vector4c& pair_state, std::array<int, 2> photons, int r0, int r1,
                           std::array<int, 2> rest) {
  Vector16c out = Vector16c::Zero();
  for (int b0 = 0; b0 < 2; ++b0) {
    for (int b1 = 0; b1 < 2; ++b1) {
      const Complex c = pair_state(2 * b0 + b1);
      if (c == Complex(0.0, 0.0)) continue;
      int idx = 0;
      idx |= b0 << (3 - photons[0]);
      idx |= b1 << (3 - photons[1]);
      idx |= r0 << (3 - rest[0]);
      idx |= r1 << (3 - rest[1]);
      out(idx) += c;
    }
  }
  return out;
}

std::array<int, 2> remaining_photons(std::array<int, 2> photons) {
  std::array<int, 2> rest{};
  int k = 0;
  for (int p = 0; p < 4; ++p) {
    if (p != photons[0] && p != photons[1]) rest[k++] = p;
  }
  return rest;
}

}  // namespace

PureState4Q PureState4Q::make(const Vector16c& amplitudes) {
  if (std::abs(amplitudes.squaredNorm() - 1.0) > kNormTol) {
    throw_invalid("PureState4Q amplitudes are not normalized");
  }
  return PureState4Q(amplitudes);
}

PureState4Q PureState4Q::normalized(const Vector16c& amplitudes) {
  const double n = amplitudes.norm();
  if (n < 1e-300) throw_invalid("cannot normalize a zero four-photon state");
  return PureState4Q(amplitudes / n);
}

PureState4Q PureState4Q::product_of_bells(BellLabel ab, std::array<int, 2> photons_ab,
                                          BellLabel cd, std::array<int, 2> photons_cd) {
  PairCut cut{photons_ab, photons_cd};
  cut.validate();
  const Vector4c a = bell_state(ab).amplitudes();
  const Vector4c c = bell_state(cd).amplitudes();
  Vector16c out = Vector16c::Zero();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const Complex amp = a(i) * c(j);
      if (amp == Complex(0.0, 0.0)) continue;
      int idx = 0;
      idx |= (i >> 1) << (3 - photons_ab[0]);
      idx |= (i & 1) << (3 - photons_ab[1]);
      idx |= (j >> 1) << (3 - photons_cd[0]);
      idx |= (j & 1) << (3 - photons_cd[1]);
      out(idx) += amp;
    }
  }
  return PureState4Q::make(out);
}

void PairCut::validate() const {
  bool seen[4] = {false, false, false, false};
  for (int p : {first[0], first[1], second[0], second[1]}) {
    if (p < 0 || p > 3) throw_invalid("pairing photon index out of range 0..3");
    if (seen[p]) throw_invalid("pairing reuses a photon");
    seen[p] = true;
  }
}

std::vector<BellBellCoefficient> bell_decompose_4q(const PureState4Q& state, const PairCut& cut) {
  cut.validate();
  std::vector<BellBellCoefficient> out;
  out.reserve(16);
  for (BellLabel la : kAllBellLabels) {
    const Vector4c a = bell_state(la).amplitudes();
    for (BellLabel lb : kAllBellLabels) {
      const Vector4c b = bell_state(lb).amplitudes();
      Complex coeff(0.0, 0.0);
      for (int idx = 0; idx < 16; ++idx) {
        const Complex amp = state.amplitudes()(idx);
        if (amp == Complex(0.0, 0.0)) continue;
        const int ia = 2 * bit_of(idx, cut.first[0]) + bit_of(idx, cut.first[1]);
        const int ib = 2 * bit_of(idx, cut.second[0]) + bit_of(idx, cut.second[1]);
        coeff += std::conj(a(ia) * b(ib)) * amp;
      }
      out.push_back({la, lb, coeff});
    }
  }
  return out;
}

PureState4Q bell_recompose_4q(const std::vector<BellBellCoefficient>& coeffs, const PairCut& cut) {
  cut.validate();
  Vector16c out = Vector16c::Zero();
  for (const auto& term : coeffs) {
    if (term.amplitude == Complex(0.0, 0.0)) continue;
    const Vector4c a = bell_state(term.first).amplitudes();
    const Vector4c b = bell_state(term.second).amplitudes();
    for (int ia = 0; ia < 4; ++ia) {
      for (int ib = 0; ib < 4; ++ib) {
        const Complex amp = term.amplitude * a(ia) * b(ib);
        if (amp == Complex(0.0, 0.0)) continue;
        int idx = 0;
        idx |= (ia >> 1) << (3 - cut.first[0]);
        idx |= (ia & 1) << (3 - cut.first[1]);
        idx |= (ib >> 1) << (3 - cut.second[0]);
        idx |= (ib & 1) << (3 - cut.second[1]);
        out(idx) += amp;
      }
    }
  }
  return PureState4Q::normalized(out);
}

ProjectionResult partial_projection(const PureState4Q& state, std::array<int, 2> photons,
                                    const PureState2Q& projector) {
  if (photons[0] < 0 || photons[0] > 3 || photons[1] < 0 || photons[1] > 3 ||
      photons[0] == photons[1]) {
    throw_invalid("partial_projection photon indices must be distinct and in 0..3");
  }
  const std::array<int, 2> rest = remaining_photons(photons);
  Vector4c conditional = Vector4c::Zero();
  for (int r0 = 0; r0 < 2; ++r0) {
    for (int r1 = 0; r1 < 2; ++r1) {
      const Vector16c bra = embed_pair_state(projector.amplitudes(), photons, r0, r1, rest);
      conditional(2 * r0 + r1) = bra.dot(state.amplitudes());
    }
  }
  return {conditional, conditional.squaredNorm()};
}

}  // namespace qdswap
