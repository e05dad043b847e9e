// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Loads the bundled calibrated configuration and checks the
// headline figures of the simulated experiment against their target bands.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

#include <json.hpp>

#include "qdswap/cli/runner.hpp"
#include "qdswap/common/error.hpp"
#include "qdswap/common/rng.hpp"
#include "qdswap/config/scenario_config.hpp"
#include "qdswap/interference/hom.hpp"
#include "qdswap/io/outputs.hpp"
#include "qdswap/quantum/four_photon.hpp"
#include "qdswap/source/pair_matching.hpp"
#include "qdswap/swap/swap_engine.hpp"
#include "qdswap/swap/swap_montecarlo.hpp"
#include "qdswap/tomo/tomography.hpp"

using namespace qdswap;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;
std::vector<std::string> g_notes;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

bool in_band(double v, double lo, double hi) { return v >= lo && v <= hi; }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

ScenarioConfig bundled_config() {
  return load_config(std::string(QDSWAP_CONFIG_DIR) + "/measured.toml");
}

// ---------------------------------------------------------------------------
// 1. Bell-basis decomposition of the double pair state.
// ---------------------------------------------------------------------------
void criterion_1() {
  const PureState4Q state =
      PureState4Q::product_of_bells(BellLabel::PhiPlus, {0, 1}, BellLabel::PhiPlus, {2, 3});
  const auto coeffs = bell_decompose_4q(state, PairCut{{0, 3}, {1, 2}});
  double max_err = 0.0;
  for (const auto& c : coeffs) {
    const Complex expect = (c.first == c.second) ? Complex(0.5, 0.0) : Complex(0.0, 0.0);
    max_err = std::max(max_err, std::abs(c.amplitude - expect));
  }
  report(1, max_err < 1e-14,
         "Bell x Bell coefficients of the double pair on the swapped cut: max deviation " +
             std::to_string(max_err));
}

// ---------------------------------------------------------------------------
// 2. HOM visibilities with the bundled calibration.
// ---------------------------------------------------------------------------
void criterion_2() {
  const ScenarioConfig cfg = bundled_config();
  bool pass = true;
  std::string detail;
  struct Case {
    Transition tr;
    double field;
    double full_lo, full_hi;
    double w10_lo, w10_hi;
  };
  const std::vector<Case> cases = {
      {Transition::X, -9.3, 0.38, 0.48, 0.61, 0.71},
      {Transition::XX, -11.3, 0.41, 0.51, 0.56, 0.66},
  };
  for (const auto& c : cases) {
    ScenarioConfig local = cfg;
    local.field_kV_cm = c.field;
    const ScenarioMode mode = (c.tr == Transition::X) ? ScenarioMode::HomX : ScenarioMode::HomXX;
    const SwapScenario sc = local.make_scenario(mode);
    const double detuning = sc.bsm_detuning_ueV();
    const double t_deph = cfg.noise.dephasing_time_ps(c.tr);
    const PhotonWavepacket wp1 = PhotonWavepacket::for_transition(c.tr, cfg.qd1, 0.0, t_deph);
    const PhotonWavepacket wp2 = PhotonWavepacket::for_transition(c.tr, cfg.qd2, 0.0, t_deph);
    HomSimulationOptions opts;
    opts.jitter_sigma_ps = cfg.station.detector_jitter_sigma_ps;
    opts.bin_width_ps = cfg.hom.bin_width_ps;
    opts.range_ps = cfg.hom.range_ps;
    opts.noise_weight = 1.0 - (1.0 - cfg.qd1.g2_zero) * (1.0 - cfg.qd2.g2_zero);
    const auto par = simulate_hom_histogram(wp1, wp2, detuning, HomConfig::Parallel, opts);
    const auto orth = simulate_hom_histogram(wp1, wp2, detuning, HomConfig::Orthogonal, opts);
    const double v_full = hom_visibility(par, orth, cfg.hom.range_ps);
    const double v_10 = hom_visibility(par, orth, 10.0);
    pass = pass && in_band(v_full, c.full_lo, c.full_hi) && in_band(v_10, c.w10_lo, c.w10_hi);
    detail += std::string(to_string(c.tr)) + ": V(full)=" + fmt(v_full) + " in [" +
              fmt(c.full_lo) + "," + fmt(c.full_hi) + "], V(10ps)=" + fmt(v_10) + " in [" +
              fmt(c.w10_lo) + "," + fmt(c.w10_hi) + "]  ";
  }
  report(2, pass, "HOM visibilities: " + detail);
}

// ---------------------------------------------------------------------------
// 3. Swapping fidelities for both scenarios, full window and 20 ps.
// ---------------------------------------------------------------------------
void criterion_3() {
  const ScenarioConfig cfg = bundled_config();
  const double inf = std::numeric_limits<double>::infinity();
  bool pass = true;
  std::string detail;

  {
    ScenarioConfig local = cfg;
    local.field_kV_cm = -9.3;
    const SwapScenario sc = local.make_scenario(ScenarioMode::SwapXX);
    const double fm_full = swapped_state_analytic(sc, BellLabel::PsiMinus, inf).fef;
    const double fp_full = swapped_state_analytic(sc, BellLabel::PsiPlus, inf).fef;
    const double fm_20 = swapped_state_analytic(sc, BellLabel::PsiMinus, 20.0).fef;
    const double fp_20 = swapped_state_analytic(sc, BellLabel::PsiPlus, 20.0).fef;
    pass = pass && in_band(fm_full, 0.55, 0.65) && in_band(fp_full, 0.51, 0.61) &&
           in_band(fm_20, 0.66, 0.76) && in_band(fp_20, 0.60, 0.70);
    pass = pass && fm_full > 0.5 && fp_full > 0.5 && fm_20 > 0.5 && fp_20 > 0.5;
    detail += "XX-swap: f-(full)=" + fmt(fm_full) + " f+(full)=" + fmt(fp_full) +
              " f-(20ps)=" + fmt(fm_20) + " f+(20ps)=" + fmt(fp_20) + "  ";
  }
  {
    ScenarioConfig local = cfg;
    local.field_kV_cm = -11.3;
    const SwapScenario sc = local.make_scenario(ScenarioMode::SwapX);
    const double fm_full = swapped_state_analytic(sc, BellLabel::PsiMinus, inf).fef;
    const double fp_full = swapped_state_analytic(sc, BellLabel::PsiPlus, inf).fef;
    const double fm_20 = swapped_state_analytic(sc, BellLabel::PsiMinus, 20.0).fef;
    const double fp_20 = swapped_state_analytic(sc, BellLabel::PsiPlus, 20.0).fef;
    pass = pass && in_band(fm_full, 0.57, 0.68) && in_band(fp_full, 0.57, 0.68) &&
           in_band(fm_20, 0.66, 0.76) && in_band(fp_20, 0.66, 0.76);
    pass = pass && fm_full > 0.5 && fp_full > 0.5 && fm_20 > 0.5 && fp_20 > 0.5;
    detail += "X-swap: f-(full)=" + fmt(fm_full) + " f+(full)=" + fmt(fp_full) +
              " f-(20ps)=" + fmt(fm_20) + " f+(20ps)=" + fmt(fp_20);
  }
  report(3, pass, "swap fidelities above the 0.5 classical limit: " + detail);
}

// ---------------------------------------------------------------------------
// 4. Corrected-fidelity maxima over the bundled windows.
// ---------------------------------------------------------------------------
void criterion_4() {
  const ScenarioConfig cfg = bundled_config();
  bool pass = true;
  std::string detail;
  struct Case {
    ScenarioMode mode;
    double field;
    double lo, hi;
    const char* name;
  };
  for (const Case& c : {Case{ScenarioMode::SwapXX, -9.3, 0.68, 0.78, "X-BSM"},
                        Case{ScenarioMode::SwapX, -11.3, 0.70, 0.80, "XX-BSM"}}) {
    ScenarioConfig local = cfg;
    local.field_kV_cm = c.field;
    const SwapScenario sc = local.make_scenario(c.mode);
    const auto rows = fidelity_vs_window(sc, budget_inputs_from_scenario(sc));
    double best = 0.0;
    for (const auto& row : rows) {
      best = std::max({best, row.f_corrected_psi_minus, row.f_corrected_psi_plus});
    }
    pass = pass && in_band(best, c.lo, c.hi);
    detail += std::string(c.name) + " corrected max=" + fmt(best) + " in [" + fmt(c.lo) + "," +
              fmt(c.hi) + "]  ";
  }
  report(4, pass, detail);
}

// ---------------------------------------------------------------------------
// 5. Rate budget for the measured-device and improved presets.
// ---------------------------------------------------------------------------
void criterion_5() {
  const ScenarioConfig cfg = bundled_config();
  const SwapScenario sc = cfg.make_scenario(ScenarioMode::SwapXX);
  const RateBudget measured = rate_budget(budget_inputs_from_scenario(sc));
  const RateBudget improved = rate_budget(improved_budget_inputs(budget_inputs_from_scenario(sc)));
  const bool pass = in_band(measured.p_swap, 1e-5, 4e-5) &&
                    in_band(measured.fourfold_rate_hz, 1.0, 10.0) &&
                    in_band(improved.p_swap, 0.12, 0.22) &&
                    in_band(improved.fourfold_rate_hz, 2000.0, 4000.0);
  report(5, pass,
         "measured preset: P_swap=" + std::to_string(measured.p_swap) +
             " rate=" + fmt(measured.fourfold_rate_hz) + " Hz; improved: P_swap=" +
             fmt(improved.p_swap) + " rate=" + fmt(improved.fourfold_rate_hz) + " Hz");
}

// ---------------------------------------------------------------------------
// 6. Pair-matching probability.
// ---------------------------------------------------------------------------
void criterion_6() {
  const ScenarioConfig cfg = bundled_config();
  const double p =
      pair_match_probability(cfg.match.spread_ueV, cfg.match.range_ueV, 1000000, cfg.seed);
  report(6, in_band(p, 0.05, 0.09),
         "pair match probability " + fmt(p) + " in [0.05, 0.09] at 1e6 samples");
}

// ---------------------------------------------------------------------------
// 7. Monte Carlo oracle across the FSS x dephasing grid.
// ---------------------------------------------------------------------------
void criterion_7() {
  const ScenarioConfig cfg = bundled_config();
  const int threads = std::max(2u, std::thread::hardware_concurrency());
  bool pass = true;
  double worst = 0.0;
  for (double fss : {0.0, 2.0, 5.0}) {
    for (double deph : {std::numeric_limits<double>::infinity(), 80.0, 30.0}) {
      ScenarioConfig local = cfg;
      local.field_kV_cm = -9.3;
      local.noise.dephasing_time_x_ps = deph;
      local.noise.dephasing_time_xx_ps = deph;
      SwapScenario sc = local.make_scenario(ScenarioMode::SwapXX);
      sc.source1.fss_ueV = fss;
      sc.source2.fss_ueV = fss;
      const HeraldedState ana = swapped_state_analytic(sc, BellLabel::PsiMinus, 20.0);
      MonteCarloOptions mc;
      mc.threads = threads;
      const MonteCarloResult res =
          swapped_state_montecarlo(sc, BellLabel::PsiMinus, 20.0, 10000000, 424242, mc);
      const double dist = trace_distance(res.rho, ana.rho);
      worst = std::max(worst, dist);
      if (dist > 0.02) pass = false;
    }
  }
  report(7, pass,
         "Monte Carlo vs analytic over the 3x3 FSS x dephasing grid at 1e7 shots: worst trace "
         "distance " +
             fmt(worst) + " (limit 0.02)");
}

// ---------------------------------------------------------------------------
// 8. FEF: magic basis versus brute-force local-unitary maximization.
// ---------------------------------------------------------------------------
Eigen::Matrix2cd random_unitary_2(Rng& rng) {
  Eigen::Matrix2cd g;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  }
  const Eigen::HouseholderQR<Eigen::Matrix2cd> qr(g);
  Eigen::Matrix2cd q = qr.householderQ();
  Eigen::Matrix2cd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < 2; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
  return q;
}

Matrix4c kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Matrix4c out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  }
  return out;
}

void criterion_8() {
  Rng rng(20240911);
  bool pass = true;
  double worst = 0.0;
  const Vector4c phi_plus = bell_state(BellLabel::PhiPlus).amplitudes();
  for (int state_idx = 0; state_idx < 50; ++state_idx) {
    Matrix4c g;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
    }
    Matrix4c m = g * g.adjoint();
    m /= m.trace().real();
    const DensityMatrix2Q rho = DensityMatrix2Q::make(m);

    auto value = [&](const Eigen::Matrix2cd& ua, const Eigen::Matrix2cd& ub) {
      const Vector4c phi = kron2(ua, ub) * phi_plus;
      return std::real(phi.dot(rho.matrix() * phi));
    };
    double best = 0.0;
    Eigen::Matrix2cd bua = Eigen::Matrix2cd::Identity();
    Eigen::Matrix2cd bub = Eigen::Matrix2cd::Identity();
    for (int k = 0; k < 100000; ++k) {
      const Eigen::Matrix2cd ua = random_unitary_2(rng);
      const Eigen::Matrix2cd ub = random_unitary_2(rng);
      const double v = value(ua, ub);
      if (v > best) {
        best = v;
        bua = ua;
        bub = ub;
      }
    }
    const Complex im(0.0, 1.0);
    double step = 0.1;
    for (int round = 0; round < 300 && step > 1e-9; ++round) {
      bool improved = false;
      for (int trial = 0; trial < 10; ++trial) {
        Eigen::Matrix2cd ha, hb;
        const double a0 = rng.normal(), a1 = rng.normal(), a2 = rng.normal();
        const double b0 = rng.normal(), b1 = rng.normal(), b2 = rng.normal();
        ha << a0, Complex(a1, a2), Complex(a1, -a2), -a0;
        hb << b0, Complex(b1, b2), Complex(b1, -b2), -b0;
        const Eigen::Matrix2cd ua = (im * step * ha).exp() * bua;
        const Eigen::Matrix2cd ub = (im * step * hb).exp() * bub;
        const double v = value(ua, ub);
        if (v > best) {
          best = v;
          bua = ua;
          bub = ub;
          improved = true;
        }
      }
      if (!improved) step *= 0.6;
    }

    const double magic = fully_entangled_fraction(rho);
    worst = std::max(worst, std::abs(magic - best));
    if (std::abs(magic - best) > 1e-3) pass = false;
  }
  report(8, pass,
         "magic-basis FEF vs brute-force maximization on 50 random states: worst deviation " +
             std::to_string(worst) + " (limit 1e-3)");
}

// ---------------------------------------------------------------------------
// 9. Tomography round trip on noiseless counts.
// ---------------------------------------------------------------------------
void criterion_9() {
  Rng rng(321);
  bool pass = true;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    Matrix4c g;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
    }
    Matrix4c m = g * g.adjoint();
    m /= m.trace().real();
    const DensityMatrix2Q truth = DensityMatrix2Q::make(m);

    CountTable table;
    for (const auto& setting : full_setting_set()) {
      CountRecord rec;
      rec.setting = setting;
      rec.expected = 1e7 * std::real((setting.projector() * truth.matrix()).trace());
      rec.sampled = static_cast<std::uint64_t>(std::llround(rec.expected));
      table.records.push_back(rec);
    }
    const MleResult fit = reconstruct_mle(table);
    const double dist = trace_distance(fit.rho, truth);
    worst = std::max(worst, dist);
    if (dist > 1e-6) pass = false;
  }
  report(9, pass,
         "noiseless MLE round trip on 100 random states: worst trace distance " +
             std::to_string(worst) + " (limit 1e-6)");
}

// ---------------------------------------------------------------------------
// 10. Physicality sweep over every artifact the verbs emit.
// ---------------------------------------------------------------------------
void collect_matrices(const nlohmann::json& j, std::vector<nlohmann::json>& out) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      if ((key == "rho" || key == "pair_density_matrix") && value.is_array()) {
        out.push_back(value);
      } else {
        collect_matrices(value, out);
      }
    }
  } else if (j.is_array()) {
    for (const auto& item : j) collect_matrices(item, out);
  }
}

void criterion_10() {
  const fs::path dir = fs::temp_directory_path() / "qdswap_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  int matrices = 0;
  int violations = 0;
  bool verbs_ok = true;
  const std::string cfg_path = std::string(QDSWAP_CONFIG_DIR) + "/measured.toml";
  const std::vector<std::string> verbs = {"source", "hom", "swap", "tomo", "rates", "match"};
  for (const auto& verb : verbs) {
    RunOptions opt;
    opt.verb = verb;
    opt.config_path = cfg_path;
    opt.out_dir = (dir / verb).string();
    if (verb == "swap") opt.shots = 200000;
    const int code = run(opt);
    if (code != 0) verbs_ok = false;
  }
  // The swap-x variant as well.
  {
    RunOptions opt;
    opt.verb = "swap";
    opt.config_path = cfg_path;
    opt.out_dir = (dir / "swap_x").string();
    opt.mode = "swap-x";
    // swap-x needs its own resonance field; rewrite the config.
    std::ifstream in(cfg_path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    const auto pos = text.find("field = \"-9.3 kV/cm\"");
    text.replace(pos, std::string("field = \"-9.3 kV/cm\"").size(), "field = \"-11.3 kV/cm\"");
    const fs::path alt = dir / "measured_swap_x.toml";
    std::ofstream(alt) << text;
    opt.config_path = alt.string();
    if (run(opt) != 0) verbs_ok = false;
  }

  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    std::ifstream in(entry.path());
    nlohmann::json j;
    in >> j;
    std::vector<nlohmann::json> found;
    collect_matrices(j, found);
    for (const auto& mj : found) {
      ++matrices;
      try {
        (void)density_matrix_from_json(mj);  // validates Hermiticity/trace/PSD
      } catch (const Error&) {
        ++violations;
      }
    }
  }
  report(10, verbs_ok && matrices > 0 && violations == 0,
         "all verbs ran; " + std::to_string(matrices) + " emitted density matrices checked, " +
             std::to_string(violations) + " violations");
}

// ---------------------------------------------------------------------------
// 11. Ideal-limit and detuned-control checks.
// ---------------------------------------------------------------------------
void criterion_11() {
  SwapScenario ideal;
  ideal.source1.x_lifetime_ps = 25.0;
  ideal.source1.xx_lifetime_ps = 16.0;
  ideal.source1.fss_ueV = 0.0;
  ideal.source2 = ideal.source1;
  ideal.bsm_photon = Transition::X;
  ideal.station = BsmStation::ideal();
  ideal.station.detector_jitter_sigma_ps = 0.0;
  ideal.windows_ps = {20.0};

  const double f_minus = swapped_state_analytic(ideal, BellLabel::PsiMinus, 0.0).fef;
  const double f_plus = swapped_state_analytic(ideal, BellLabel::PsiPlus, 0.0).fef;
  const double f_un = fully_entangled_fraction(unheralded_state(ideal));

  const ScenarioConfig cfg = bundled_config();
  ScenarioConfig detuned_cfg = cfg;
  detuned_cfg.field_kV_cm = 0.0;  // lines left 120 ueV apart
  const SwapScenario detuned = detuned_cfg.make_scenario(ScenarioMode::SwapXX);
  SwapEngineOptions override_opts;
  override_opts.allow_detuned = true;
  const double f_detuned =
      swapped_state_analytic(detuned, BellLabel::PsiMinus,
                             std::numeric_limits<double>::infinity(), override_opts)
          .fef;

  const bool pass = std::abs(f_minus - 1.0) < 1e-12 && std::abs(f_plus - 1.0) < 1e-12 &&
                    std::abs(f_un - 0.25) < 1e-9 && f_detuned <= 0.55;
  report(11, pass,
         "ideal swap f-=" + std::to_string(f_minus) + " f+=" + std::to_string(f_plus) +
             ", unheralded FEF=" + std::to_string(f_un) + ", detuned control FEF=" +
             fmt(f_detuned) + " <= 0.55");
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  const auto t1 = std::chrono::steady_clock::now();
  const double seconds = std::chrono::duration<double>(t1 - t0).count();
  std::printf("%s: %d criterion(s) failed, total runtime %.1f s\n",
              g_failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED", g_failures, seconds);
  return g_failures == 0 ? 0 : 1;
}
