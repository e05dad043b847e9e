#include "qdswap/quantum/two_qubit.hpp"

#include <cmath>

#include "qdswap/common/error.hpp"

namespace qdswap {

namespace {

constexpr double kNormTol = 1e-12;
constexpr double kHermTol = 1e-12;
constexpr double kTraceTol = 1e-10;
constexpr double kPsdFloor = -1e-9;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

}  // namespace

std::string_view to_string(BellLabel label) {
  switch (label) {
    case BellLabel::PhiPlus: return "phi_plus";
    case BellLabel::PhiMinus: return "phi_minus";
    case BellLabel::PsiPlus: return "psi_plus";
    case BellLabel::PsiMinus: return "psi_minus";
  }
  return "?";
}

PureState2Q PureState2Q::make(const Vector4c& amplitudes) {
  const double n2 = amplitudes.squaredNorm();
  if (std::abs(n2 - 1.0) > kNormTol) {
    throw_invalid("PureState2Q amplitudes are not normalized");
  }
  return PureState2Q(amplitudes);
}

PureState2Q PureState2Q::normalized(const Vector4c& amplitudes) {
  const double n = amplitudes.norm();
  if (n < 1e-300) throw_invalid("cannot normalize a zero two-qubit state");
  return PureState2Q(amplitudes / n);
}

DensityMatrix2Q DensityMatrix2Q::make(const Matrix4c& entries) {
  if ((entries - entries.adjoint()).cwiseAbs().maxCoeff() > kHermTol) {
    throw_physics("density matrix is not Hermitian within tolerance");
  }
  const double tr = entries.trace().real();
  if (std::abs(tr - 1.0) > kTraceTol) {
    throw_physics("density matrix trace differs from 1 beyond tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(0.5 * (entries + entries.adjoint()));
  const Eigen::Vector4d evals = es.eigenvalues();
  if (evals.minCoeff() < kPsdFloor) {
    throw_physics("density matrix has a negative eigenvalue beyond the -1e-9 floor");
  }
  if (evals.minCoeff() < 0.0) {
    // Clamp the sub-floor negatives to zero and renormalize.
    Eigen::Vector4d clamped = evals.cwiseMax(0.0);
    clamped /= clamped.sum();
    Matrix4c fixed = es.eigenvectors() * clamped.asDiagonal() * es.eigenvectors().adjoint();
    return DensityMatrix2Q(0.5 * (fixed + fixed.adjoint()));
  }
  return DensityMatrix2Q(entries);
}

DensityMatrix2Q DensityMatrix2Q::from_pure(const PureState2Q& psi) {
  return DensityMatrix2Q(psi.projector());
}

DensityMatrix2Q DensityMatrix2Q::maximally_mixed() {
  return DensityMatrix2Q(0.25 * Matrix4c::Identity());
}

PureState2Q bell_state(BellLabel label) {
  Vector4c v = Vector4c::Zero();
  switch (label) {
    case BellLabel::PhiPlus:
      v(0) = kInvSqrt2;
      v(3) = kInvSqrt2;
      break;
    case BellLabel::PhiMinus:
      v(0) = kInvSqrt2;
      v(3) = -kInvSqrt2;
      break;
    case BellLabel::PsiPlus:
      v(1) = kInvSqrt2;
      v(2) = kInvSqrt2;
      break;
    case BellLabel::PsiMinus:
      v(1) = kInvSqrt2;
      v(2) = -kInvSqrt2;
      break;
  }
  return PureState2Q::make(v);
}

double fidelity_to_bell(const DensityMatrix2Q& rho, BellLabel label) {
  const Vector4c phi = bell_state(label).amplitudes();
  return std::real(phi.dot(rho.matrix() * phi));
}

double fully_entangled_fraction(const DensityMatrix2Q& rho) {
  // Magic basis columns: |Phi+>, i|Phi->, i|Psi+>, |Psi->. In this basis every
  // maximally entangled state has real coefficients up to a global phase, so
  // the maximization reduces to the top eigenvalue of the real part.
  const Complex i(0.0, 1.0);
  Matrix4c magic;
  magic.col(0) = bell_state(BellLabel::PhiPlus).amplitudes();
  magic.col(1) = i * bell_state(BellLabel::PhiMinus).amplitudes();
  magic.col(2) = i * bell_state(BellLabel::PsiPlus).amplitudes();
  magic.col(3) = bell_state(BellLabel::PsiMinus).amplitudes();

  const Matrix4c rho_magic = magic.adjoint() * rho.matrix() * magic;
  const Eigen::Matrix4d re = rho_magic.real();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(0.5 * (re + re.transpose()));
  return es.eigenvalues().maxCoeff();
}

BellFidelity best_bell_fidelity(const DensityMatrix2Q& rho) {
  BellFidelity best{BellLabel::PhiPlus, -1.0};
  for (BellLabel label : kAllBellLabels) {
    const double f = fidelity_to_bell(rho, label);
    if (f > best.fidelity) best = {label, f};
  }
  return best;
}

double concurrence(const DensityMatrix2Q& rho) {
  // Spin-flipped state: (sigma_y (x) sigma_y) rho* (sigma_y (x) sigma_y).
  Matrix4c yy = Matrix4c::Zero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Matrix4c rho_tilde = yy * rho.matrix().conjugate() * yy;
  const Matrix4c prod = rho.matrix() * rho_tilde;

  Eigen::ComplexEigenSolver<Matrix4c> es(prod);
  Eigen::Vector4d lambdas;
  for (int k = 0; k < 4; ++k) {
    lambdas(k) = std::sqrt(std::max(0.0, es.eigenvalues()(k).real()));
  }
  std::sort(lambdas.data(), lambdas.data() + 4, std::greater<double>());
  return std::max(0.0, lambdas(0) - lambdas(1) - lambdas(2) - lambdas(3));
}

double trace_distance(const DensityMatrix2Q& a, const DensityMatrix2Q& b) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(a.matrix() - b.matrix());
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace qdswap
