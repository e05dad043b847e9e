#include "qdswap/tomo/tomography.hpp"

#include <cmath>

#include "qdswap/common/error.hpp"
#include "qdswap/common/rng.hpp"

namespace qdswap {

namespace {

using Vector2c = Eigen::Vector2cd;

// Orthonormal Hermitian basis for the linear inversion (trace inner product).
std::vector<Matrix4c> hermitian_basis() {
  std::vector<Matrix4c> basis;
  basis.reserve(16);
  for (int i = 0; i < 4; ++i) {
    Matrix4c m = Matrix4c::Zero();
    m(i, i) = 1.0;
    basis.push_back(m);
  }
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      Matrix4c re = Matrix4c::Zero();
      re(i, j) = inv_sqrt2;
      re(j, i) = inv_sqrt2;
      basis.push_back(re);
      Matrix4c im = Matrix4c::Zero();
      im(i, j) = Complex(0.0, -inv_sqrt2);
      im(j, i) = Complex(0.0, inv_sqrt2);
      basis.push_back(im);
    }
  }
  return basis;
}

struct TriangularParam {
  // rho = T T^dag / tr(T T^dag) with T lower triangular: 4 real diagonal
  // entries followed by 6 complex sub-diagonal entries.
  Eigen::Matrix<double, 16, 1> theta = Eigen::Matrix<double, 16, 1>::Zero();

  Matrix4c t_matrix() const {
    Matrix4c t = Matrix4c::Zero();
    for (int i = 0; i < 4; ++i) t(i, i) = theta(i);
    int k = 4;
    for (int i = 1; i < 4; ++i) {
      for (int j = 0; j < i; ++j) {
        t(i, j) = Complex(theta(k), theta(k + 1));
        k += 2;
      }
    }
    return t;
  }

  Matrix4c rho() const {
    const Matrix4c t = t_matrix();
    Matrix4c m = t * t.adjoint();
    const double tr = m.trace().real();
    return m / tr;
  }

  static TriangularParam from_density(const Matrix4c& rho_in) {
    // Cholesky of a slightly regularized copy keeps the start interior.
    Matrix4c reg = rho_in + 1e-8 * Matrix4c::Identity();
    reg /= reg.trace().real();
    Eigen::LLT<Matrix4c> llt(reg);
    Matrix4c l = llt.matrixL();
    TriangularParam p;
    for (int i = 0; i < 4; ++i) p.theta(i) = l(i, i).real();
    int k = 4;
    for (int i = 1; i < 4; ++i) {
      for (int j = 0; j < i; ++j) {
        p.theta(k) = l(i, j).real();
        p.theta(k + 1) = l(i, j).imag();
        k += 2;
      }
    }
    return p;
  }
};

struct LikelihoodModel {
  std::vector<Matrix4c> projectors;
  std::vector<double> counts;
  std::vector<double> weights;
  double total_counts = 0.0;

  explicit LikelihoodModel(const CountTable& table) {
    projectors.reserve(table.records.size());
    for (const auto& rec : table.records) {
      projectors.push_back(rec.setting.projector());
      counts.push_back(static_cast<double>(rec.sampled));
      weights.push_back(rec.weight);
      total_counts += static_cast<double>(rec.sampled);
    }
  }

  // Photon flux is profiled out of the Poisson likelihood in closed form.
  double flux_estimate(const Matrix4c& rho) const {
    double denom = 0.0;
    for (size_t k = 0; k < projectors.size(); ++k) {
      denom += weights[k] * std::real((projectors[k] * rho).trace());
    }
    if (denom <= 0.0) return 0.0;
    return total_counts / denom;
  }

  double log_likelihood(const Matrix4c& rho) const {
    const double n_hat = flux_estimate(rho);
    if (n_hat <= 0.0) return -std::numeric_limits<double>::infinity();
    double ll = 0.0;
    for (size_t k = 0; k < projectors.size(); ++k) {
      const double p = std::real((projectors[k] * rho).trace());
      const double mu = n_hat * weights[k] * p;
      if (counts[k] > 0.0) {
        if (mu <= 0.0) return -std::numeric_limits<double>::infinity();
        ll += counts[k] * std::log(mu);
      }
      ll -= mu;
    }
    return ll;
  }

  // Gradient of the log-likelihood with respect to the triangular parameters.
  Eigen::Matrix<double, 16, 1> gradient(const TriangularParam& param) const {
    const Matrix4c t = param.t_matrix();
    Matrix4c tt = t * t.adjoint();
    const double s = tt.trace().real();
    const Matrix4c rho = tt / s;
    const double n_hat = flux_estimate(rho);

    Matrix4c a = Matrix4c::Zero();
    for (size_t k = 0; k < projectors.size(); ++k) {
      const double p = std::real((projectors[k] * rho).trace());
      const double coeff = (counts[k] > 0.0 && p > 0.0 ? counts[k] / p : 0.0) -
                           n_hat * weights[k];
      a += coeff * projectors[k];
    }
    const double tr_rho_a = std::real((rho * a).trace());
    const Matrix4c b = (a - tr_rho_a * Matrix4c::Identity()) / s;
    const Matrix4c m = b * t;

    Eigen::Matrix<double, 16, 1> grad;
    for (int i = 0; i < 4; ++i) grad(i) = 2.0 * m(i, i).real();
    int k = 4;
    for (int i = 1; i < 4; ++i) {
      for (int j = 0; j < i; ++j) {
        grad(k) = 2.0 * m(i, j).real();
        grad(k + 1) = 2.0 * m(i, j).imag();
        k += 2;
      }
    }
    return grad;
  }
};

}  // namespace

std::string_view to_string(Analyzer a) {
  switch (a) {
    case Analyzer::H: return "H";
    case Analyzer::V: return "V";
    case Analyzer::D: return "D";
    case Analyzer::A: return "A";
    case Analyzer::R: return "R";
    case Analyzer::L: return "L";
  }
  return "?";
}

Analyzer analyzer_from_string(std::string_view s) {
  if (s == "H") return Analyzer::H;
  if (s == "V") return Analyzer::V;
  if (s == "D") return Analyzer::D;
  if (s == "A") return Analyzer::A;
  if (s == "R") return Analyzer::R;
  if (s == "L") return Analyzer::L;
  throw_invalid("unknown analyzer state: " + std::string(s));
}

Eigen::Vector2cd analyzer_state(Analyzer a) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  switch (a) {
    case Analyzer::H: return {1.0, 0.0};
    case Analyzer::V: return {0.0, 1.0};
    case Analyzer::D: return {inv_sqrt2, inv_sqrt2};
    case Analyzer::A: return {inv_sqrt2, -inv_sqrt2};
    case Analyzer::R: return {inv_sqrt2, -i * inv_sqrt2};
    case Analyzer::L: return {inv_sqrt2, i * inv_sqrt2};
  }
  return {1.0, 0.0};
}

Matrix4c MeasurementSetting::projector() const {
  const Vector2c s1 = analyzer_state(arm1);
  const Vector2c s2 = analyzer_state(arm2);
  Vector4c joint;
  joint(0) = s1(0) * s2(0);
  joint(1) = s1(0) * s2(1);
  joint(2) = s1(1) * s2(0);
  joint(3) = s1(1) * s2(1);
  return joint * joint.adjoint();
}

std::vector<MeasurementSetting> full_setting_set() {
  const std::array<Analyzer, 6> all = {Analyzer::H, Analyzer::V, Analyzer::D,
                                       Analyzer::A, Analyzer::R, Analyzer::L};
  std::vector<MeasurementSetting> out;
  out.reserve(36);
  for (Analyzer a1 : all) {
    for (Analyzer a2 : all) out.push_back({a1, a2});
  }
  return out;
}

CountTable simulate_counts(const DensityMatrix2Q& rho,
                           const std::vector<MeasurementSetting>& settings, double total_flux,
                           std::uint64_t seed) {
  if (total_flux <= 0.0) throw_invalid("total_flux must be positive");
  if (settings.empty()) throw_invalid("no measurement settings");
  CountTable table;
  table.records.reserve(settings.size());
  Rng rng(seed);
  for (const auto& setting : settings) {
    CountRecord rec;
    rec.setting = setting;
    rec.weight = 1.0;
    rec.expected = total_flux * std::real((setting.projector() * rho.matrix()).trace());
    rec.sampled = rng.poisson(rec.expected);
    table.records.push_back(rec);
  }
  return table;
}

LinearEstimate reconstruct_linear(const CountTable& table) {
  const size_t n = table.records.size();
  if (n < 16) throw_invalid("linear inversion needs at least 16 settings");

  const auto basis = hermitian_basis();
  Eigen::MatrixXd design(n, 16);
  Eigen::VectorXd y(n);
  for (size_t k = 0; k < n; ++k) {
    const Matrix4c p = table.records[k].setting.projector();
    for (int m = 0; m < 16; ++m) {
      design(k, m) = std::real((basis[m] * p).trace());
    }
    y(k) = static_cast<double>(table.records[k].sampled) / table.records[k].weight;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-10);
  if (svd.rank() < 16) {
    throw_invalid("rank-deficient setting set: not informationally complete");
  }
  const Eigen::VectorXd x = svd.solve(y);

  Matrix4c m = Matrix4c::Zero();
  for (int k = 0; k < 16; ++k) m += x(k) * basis[k];
  const double tr = m.trace().real();
  if (std::abs(tr) < 1e-300) throw_invalid("degenerate linear inversion: zero trace");
  m /= tr;
  m = 0.5 * (m + m.adjoint());

  Eigen::SelfAdjointEigenSolver<Matrix4c> es(m);
  LinearEstimate out{m, es.eigenvalues().minCoeff() >= -1e-9};
  return out;
}

double poisson_log_likelihood(const DensityMatrix2Q& rho, const CountTable& table) {
  LikelihoodModel model(table);
  return model.log_likelihood(rho.matrix());
}

MleResult reconstruct_mle(const CountTable& table, const MleOptions& opts) {
  LikelihoodModel model(table);
  if (table.records.size() < 16) throw_invalid("MLE needs an informationally complete table");

  // Start from the physical projection of the linear estimate.
  Matrix4c start;
  try {
    const LinearEstimate lin = reconstruct_linear(table);
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(lin.matrix);
    Eigen::Vector4d ev = es.eigenvalues().cwiseMax(1e-6);
    ev /= ev.sum();
    start = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  } catch (const Error&) {
    start = 0.25 * Matrix4c::Identity();
  }

  TriangularParam param = TriangularParam::from_density(start);
  double ll = model.log_likelihood(param.rho());
  const double scale = 1.0 + model.total_counts;

  double step = 1.0 / scale;
  int iter = 0;
  for (; iter < opts.max_iterations; ++iter) {
    const Eigen::Matrix<double, 16, 1> grad = model.gradient(param);
    const double gnorm = grad.norm() / scale;
    if (gnorm < opts.gradient_tolerance) break;

    // Backtracking line search along the gradient.
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      TriangularParam trial = param;
      trial.theta += step * grad;
      const double trial_ll = model.log_likelihood(trial.rho());
      if (trial_ll > ll + 1e-4 * step * grad.squaredNorm()) {
        param = trial;
        ll = trial_ll;
        accepted = true;
        step *= 1.6;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // The line search stalled at numerical precision; re-check optimality.
      if (gnorm < 1e4 * opts.gradient_tolerance) break;
      throw_physics("MLE failed to converge: line search stalled with gradient norm " +
                    std::to_string(gnorm) + " after " + std::to_string(iter) + " iterations");
    }
  }
  if (iter >= opts.max_iterations) {
    const double gnorm = model.gradient(param).norm() / scale;
    if (gnorm > 1e4 * opts.gradient_tolerance) {
      throw_physics("MLE failed to converge within " + std::to_string(opts.max_iterations) +
                    " iterations; gradient norm " + std::to_string(gnorm));
    }
  }

  MleResult out{DensityMatrix2Q::make(param.rho()), ll, iter};
  return out;
}

BootstrapResult bootstrap_fef(const CountTable& table, int n_replicas, std::uint64_t seed,
                              const MleOptions& opts) {
  if (n_replicas < 2) throw_invalid("bootstrap needs at least 2 replicas");
  const MleResult fit = reconstruct_mle(table, opts);
  LikelihoodModel model(table);
  const double n_hat = model.flux_estimate(fit.rho.matrix());

  BootstrapResult out;
  out.fef_samples.reserve(n_replicas);
  Rng rng(seed);
  for (int r = 0; r < n_replicas; ++r) {
    CountTable replica = table;
    for (size_t k = 0; k < replica.records.size(); ++k) {
      const double p = std::real(
          (replica.records[k].setting.projector() * fit.rho.matrix()).trace());
      const double mu = n_hat * replica.records[k].weight * std::max(0.0, p);
      replica.records[k].sampled = rng.poisson(mu);
    }
    const MleResult refit = reconstruct_mle(replica, opts);
    out.fef_samples.push_back(fully_entangled_fraction(refit.rho));
  }

  double mean = 0.0;
  for (double v : out.fef_samples) mean += v;
  mean /= out.fef_samples.size();
  double var = 0.0;
  for (double v : out.fef_samples) var += (v - mean) * (v - mean);
  var /= (out.fef_samples.size() - 1);
  out.fef_mean = mean;
  out.fef_stddev = std::sqrt(var);
  return out;
}

}  // namespace qdswap
