#include "qdswap/cli/runner.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "qdswap/common/error.hpp"
#include "qdswap/config/scenario_config.hpp"
#include "qdswap/interference/hom.hpp"
#include "qdswap/io/outputs.hpp"
#include "qdswap/source/pair_matching.hpp"
#include "qdswap/swap/swap_engine.hpp"
#include "qdswap/swap/swap_montecarlo.hpp"
#include "qdswap/tomo/gated.hpp"
#include "qdswap/tomo/tomography.hpp"

namespace qdswap {

namespace {

using nlohmann::json;

constexpr const char* kSchemaTag = "qdswap v1";

std::string out_path(const RunOptions& opt, const std::string& name) {
  std::filesystem::create_directories(opt.out_dir);
  return (std::filesystem::path(opt.out_dir) / name).string();
}

ScenarioMode effective_mode(const ScenarioConfig& cfg, const RunOptions& opt) {
  if (opt.mode) return scenario_mode_from_string(*opt.mode);
  return cfg.mode;
}

std::uint64_t effective_seed(const ScenarioConfig& cfg, const RunOptions& opt) {
  return opt.seed ? *opt.seed : cfg.seed;
}

// ---------------------------------------------------------------------------
// source: per-dot characterization.
// ---------------------------------------------------------------------------
void run_source(const ScenarioConfig& cfg, const RunOptions& opt) {
  json out;
  out["schema"] = kSchemaTag;
  int index = 1;
  for (const QdSource* src : {&cfg.qd1, &cfg.qd2}) {
    const DensityMatrix2Q rho = time_averaged_pair_dm(*src, cfg.noise.noise_floor_scale);
    json block;
    block["pair_density_matrix"] = density_matrix_json(rho);
    block["summary"] = state_summary_json(rho);
    block["x_lifetime_ps"] = src->x_lifetime_ps;
    block["xx_lifetime_ps"] = src->xx_lifetime_ps;
    block["fss_ueV"] = src->fss_ueV;
    out["qd" + std::to_string(index)] = block;
    ++index;
  }
  for (Transition t : {Transition::X, Transition::XX}) {
    try {
      const double field = find_resonance_field(cfg.qd1, cfg.qd2, t, cfg.actuator);
      out["resonance_field_kV_cm"][std::string(to_string(t))] = field;
    } catch (const Error&) {
      out["resonance_field_kV_cm"][std::string(to_string(t))] = nullptr;
    }
  }
  write_text_file(out_path(opt, "source.json"), out.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// hom: histograms + visibility table.
// ---------------------------------------------------------------------------
void run_hom(const ScenarioConfig& cfg, const RunOptions& opt) {
  // The interfering transition follows the configured scenario: a swap on the
  // XX photons interferes the X ones and vice versa.
  ScenarioMode mode = effective_mode(cfg, opt);
  if (mode == ScenarioMode::SwapXX) mode = ScenarioMode::HomX;
  if (mode == ScenarioMode::SwapX) mode = ScenarioMode::HomXX;
  if (mode != ScenarioMode::HomX && mode != ScenarioMode::HomXX) {
    throw_invalid("hom verb needs a hom-x/hom-xx or swap mode (use --mode to override)");
  }
  const Transition tr = (mode == ScenarioMode::HomX) ? Transition::X : Transition::XX;
  const SwapScenario sc = cfg.make_scenario(mode);

  // The interfering line is strain-tuned into resonance unless the scenario
  // is intentionally detuned.
  const double detuning = sc.bsm_detuning_ueV();
  const double t_deph = cfg.noise.dephasing_time_ps(tr);
  const PhotonWavepacket wp1 = PhotonWavepacket::for_transition(tr, cfg.qd1, 0.0, t_deph);
  const PhotonWavepacket wp2 = PhotonWavepacket::for_transition(tr, cfg.qd2, 0.0, t_deph);

  HomSimulationOptions sim;
  sim.jitter_sigma_ps = cfg.station.detector_jitter_sigma_ps;
  sim.bin_width_ps = cfg.hom.bin_width_ps;
  sim.range_ps = cfg.hom.range_ps;
  sim.noise_weight = 1.0 - (1.0 - cfg.qd1.g2_zero) * (1.0 - cfg.qd2.g2_zero);
  sim.total_counts = 1e6;  // nominal pair events behind the expected histogram

  const CoincidenceHistogram par =
      simulate_hom_histogram(wp1, wp2, detuning, HomConfig::Parallel, sim);
  const CoincidenceHistogram orth =
      simulate_hom_histogram(wp1, wp2, detuning, HomConfig::Orthogonal, sim);

  std::ostringstream histo;
  histo << "# " << kSchemaTag << " hom histogram, transition=" << to_string(tr) << "\n";
  histo << "delay_ps,counts_parallel,counts_orthogonal\n";
  for (int i = 0; i < par.n_bins(); ++i) {
    histo << format_double(par.delay_of_bin(i)) << "," << format_double(par.counts[i]) << ","
          << format_double(orth.counts[i]) << "\n";
  }
  write_text_file(out_path(opt, "hom_histogram.csv"), histo.str());

  const double g2_sum = cfg.qd1.g2_zero + cfg.qd2.g2_zero;
  const double imbalance = std::abs(cfg.station.bs_reflectivity - 0.5);
  std::ostringstream vis;
  vis << "# " << kSchemaTag << " hom visibility, transition=" << to_string(tr) << "\n";
  vis << "window_ps,v_raw,v_corrected\n";
  for (double w : cfg.hom.windows_ps) {
    const double window = std::isinf(w) ? par.range_ps() : w;
    const double v_raw = hom_visibility(par, orth, window);
    const double v_corr = corrected_visibility(v_raw, g2_sum, imbalance);
    vis << format_double(w) << "," << format_double(v_raw) << "," << format_double(v_corr)
        << "\n";
  }
  write_text_file(out_path(opt, "hom_visibility.csv"), vis.str());
}

// ---------------------------------------------------------------------------
// swap: fidelity-versus-window table + per-window matrices.
// ---------------------------------------------------------------------------
void run_swap(const ScenarioConfig& cfg, const RunOptions& opt) {
  const ScenarioMode mode = effective_mode(cfg, opt);
  if (mode != ScenarioMode::SwapXX && mode != ScenarioMode::SwapX) {
    throw_invalid("swap verb needs mode swap-xx or swap-x (use --mode to override)");
  }
  const SwapScenario sc = cfg.make_scenario(mode);

  SwapEngineOptions engine;
  engine.allow_detuned = opt.allow_detuned;

  const RateBudgetInputs budget =
      (cfg.rates.preset == "improved")
          ? improved_budget_inputs(budget_inputs_from_scenario(sc))
          : budget_inputs_from_scenario(sc);

  const std::vector<FidelityWindowRow> rows = fidelity_vs_window(sc, budget, engine);

  std::ostringstream csv;
  csv << "# " << kSchemaTag << " swap fidelity, mode=" << to_string(mode) << "\n";
  csv << "window_ps,f_psi_minus,f_psi_plus,rate_hz,f_corrected_psi_minus,f_corrected_psi_plus\n";
  for (const auto& row : rows) {
    csv << format_double(row.window_ps) << "," << format_double(row.f_psi_minus) << ","
        << format_double(row.f_psi_plus) << "," << format_double(row.rate_hz) << ","
        << format_double(row.f_corrected_psi_minus) << ","
        << format_double(row.f_corrected_psi_plus) << "\n";
  }
  write_text_file(out_path(opt, "swap_fidelity.csv"), csv.str());

  json out;
  out["schema"] = kSchemaTag;
  out["mode"] = std::string(to_string(mode));
  out["detuning_ueV"] = sc.bsm_detuning_ueV();
  out["windows"] = json::array();
  for (double w : sc.windows_ps) {
    json entry;
    entry["window_ps"] = std::isinf(w) ? json("inf") : json(w);
    for (BellLabel herald : {BellLabel::PsiMinus, BellLabel::PsiPlus}) {
      const HeraldedState st = swapped_state_analytic(sc, herald, w, engine);
      json h;
      h["rho"] = density_matrix_json(st.rho);
      h["summary"] = state_summary_json(st.rho);
      h["herald_probability"] = st.herald_probability;
      entry[std::string(to_string(herald))] = h;
    }
    out["windows"].push_back(entry);
  }
  const DensityMatrix2Q unheralded = unheralded_state(sc, engine);
  out["unheralded"] = {{"rho", density_matrix_json(unheralded)},
                       {"summary", state_summary_json(unheralded)}};

  if (opt.shots) {
    MonteCarloOptions mc;
    mc.allow_detuned = opt.allow_detuned;
    mc.threads = opt.threads;
    const double w = sc.windows_ps.back();
    json mc_block;
    for (BellLabel herald : {BellLabel::PsiMinus, BellLabel::PsiPlus}) {
      const MonteCarloResult res = swapped_state_montecarlo(
          sc, herald, w, *opt.shots, effective_seed(cfg, opt), mc);
      const HeraldedState ana = swapped_state_analytic(sc, herald, w, engine);
      json h;
      h["rho"] = density_matrix_json(res.rho);
      h["summary"] = state_summary_json(res.rho);
      h["herald_count"] = res.herald_count;
      h["herald_probability"] = res.herald_probability;
      h["trace_distance_to_analytic"] = trace_distance(res.rho, ana.rho);
      mc_block[std::string(to_string(herald))] = h;
    }
    mc_block["window_ps"] = std::isinf(w) ? json("inf") : json(w);
    mc_block["shots"] = *opt.shots;
    out["montecarlo"] = mc_block;
  }

  write_text_file(out_path(opt, "swap_windows.json"), out.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// tomo: reconstruction from a count table or the closed simulation loop.
// ---------------------------------------------------------------------------
CountTable read_count_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_invalid("cannot open count table: " + path);
  CountTable table;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::string a1, a2, counts;
    if (!std::getline(row, a1, ',') || !std::getline(row, a2, ',') ||
        !std::getline(row, counts, ',')) {
      throw_invalid("count table line " + std::to_string(lineno) +
                    ": expected setting_arm1,setting_arm2,counts");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    a1 = trim(a1);
    a2 = trim(a2);
    counts = trim(counts);
    if (a1 == "setting_arm1") continue;  // header row
    CountRecord rec;
    rec.setting = {analyzer_from_string(a1), analyzer_from_string(a2)};
    try {
      rec.sampled = static_cast<std::uint64_t>(std::stoull(counts));
    } catch (const std::exception&) {
      throw_invalid("count table line " + std::to_string(lineno) + ": bad count '" + counts +
                    "'");
    }
    rec.expected = static_cast<double>(rec.sampled);
    table.records.push_back(rec);
  }
  if (table.records.empty()) throw_invalid("count table is empty");
  return table;
}

void run_tomo(const ScenarioConfig& cfg, const RunOptions& opt) {
  json out;
  out["schema"] = kSchemaTag;
  CountTable table;
  if (!opt.tomo_counts_path.empty()) {
    table = read_count_table(opt.tomo_counts_path);
    out["input"] = opt.tomo_counts_path;
  } else {
    // Closed loop: heralded swapped state -> counts at the configured flux.
    const ScenarioMode mode = effective_mode(cfg, opt);
    const ScenarioMode swap_mode =
        (mode == ScenarioMode::SwapX) ? ScenarioMode::SwapX : ScenarioMode::SwapXX;
    const SwapScenario sc = cfg.make_scenario(swap_mode);
    SwapEngineOptions engine;
    engine.allow_detuned = opt.allow_detuned;
    const double window = sc.windows_ps.front();
    const HeraldedState heralded =
        swapped_state_analytic(sc, BellLabel::PsiMinus, window, engine);
    table = simulate_counts(heralded.rho, full_setting_set(), cfg.tomo.flux,
                            effective_seed(cfg, opt));
    out["input"] = "closed-loop";
    out["true_state"] = {{"rho", density_matrix_json(heralded.rho)},
                         {"summary", state_summary_json(heralded.rho)},
                         {"window_ps", window}};
  }

  const LinearEstimate linear = reconstruct_linear(table);
  const MleResult mle = reconstruct_mle(table);
  const BootstrapResult boot =
      bootstrap_fef(table, cfg.tomo.bootstrap_replicas, effective_seed(cfg, opt) + 1);

  out["linear_physical"] = linear.physical;
  out["rho"] = density_matrix_json(mle.rho);
  out["summary"] = state_summary_json(mle.rho);
  out["log_likelihood"] = mle.log_likelihood;
  out["iterations"] = mle.iterations;
  out["fef_bootstrap"] = {{"mean", boot.fef_mean},
                          {"stddev", boot.fef_stddev},
                          {"replicas", boot.fef_samples.size()}};
  write_text_file(out_path(opt, "tomo.json"), out.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// rates: factor-by-factor budget for both presets.
// ---------------------------------------------------------------------------
void run_rates(const ScenarioConfig& cfg, const RunOptions& opt) {
  const ScenarioMode mode = effective_mode(cfg, opt);
  const ScenarioMode swap_mode =
      (mode == ScenarioMode::SwapX) ? ScenarioMode::SwapX : ScenarioMode::SwapXX;
  const SwapScenario sc = cfg.make_scenario(swap_mode);

  const RateBudgetInputs measured = budget_inputs_from_scenario(sc);
  const RateBudgetInputs improved = improved_budget_inputs(measured);

  std::ostringstream csv;
  csv << "# " << kSchemaTag << " rate budget\n";
  csv << "preset,factor,value\n";
  json out;
  out["schema"] = kSchemaTag;
  for (const auto& [name, inputs] : {std::pair<std::string, RateBudgetInputs>{"measured", measured},
                                     {"improved", improved}}) {
    const RateBudget budget = rate_budget(inputs);
    for (const auto& f : budget.swap_factors) {
      csv << name << "," << f.name << "," << format_double(f.value) << "\n";
    }
    for (const auto& f : budget.kept_factors) {
      csv << name << "," << f.name << "," << format_double(f.value) << "\n";
    }
    csv << name << ",p_swap," << format_double(budget.p_swap) << "\n";
    csv << name << ",fourfold_rate_hz," << format_double(budget.fourfold_rate_hz) << "\n";
    out[name] = {{"p_swap", budget.p_swap},
                 {"p_fourfold", budget.p_fourfold},
                 {"fourfold_rate_hz", budget.fourfold_rate_hz}};
  }
  write_text_file(out_path(opt, "rates.csv"), csv.str());
  write_text_file(out_path(opt, "rates.json"), out.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// match: strain-tunable pair-matching probability.
// ---------------------------------------------------------------------------
void run_match(const ScenarioConfig& cfg, const RunOptions& opt) {
  const std::uint64_t samples = opt.shots ? *opt.shots : cfg.match.samples;
  const double p = pair_match_probability(cfg.match.spread_ueV, cfg.match.range_ueV, samples,
                                          effective_seed(cfg, opt));
  json out;
  out["schema"] = kSchemaTag;
  out["probability"] = p;
  out["samples"] = samples;
  out["seed"] = effective_seed(cfg, opt);
  out["spread_ueV"] = cfg.match.spread_ueV;
  out["range_ueV"] = cfg.match.range_ueV;
  write_text_file(out_path(opt, "match.json"), out.dump(2) + "\n");
  std::cout << "pair match probability: " << format_double(p) << "\n";
}

}  // namespace

int run(const RunOptions& options) {
  try {
    if (options.config_path.empty()) throw_invalid("missing --config path");
    const ScenarioConfig cfg = load_config(options.config_path);

    if (options.verb == "source") {
      run_source(cfg, options);
    } else if (options.verb == "hom") {
      run_hom(cfg, options);
    } else if (options.verb == "swap") {
      run_swap(cfg, options);
    } else if (options.verb == "tomo") {
      run_tomo(cfg, options);
    } else if (options.verb == "rates") {
      run_rates(cfg, options);
    } else if (options.verb == "match") {
      run_match(cfg, options);
    } else {
      throw_invalid("unknown verb '" + options.verb + "'");
    }
    return 0;
  } catch (const Error& e) {
    json report;
    report["error"] = {{"message", e.what()},
                       {"field", e.field()},
                       {"kind", e.kind() == ErrorKind::InvalidArgument ? "invalid_argument"
                                : e.kind() == ErrorKind::Physics       ? "physics"
                                                                 : "insufficient_statistics"}};
    std::cerr << report.dump() << "\n";
    switch (e.kind()) {
      case ErrorKind::InvalidArgument: return 2;
      case ErrorKind::Physics: return 3;
      case ErrorKind::InsufficientStatistics: return 4;
    }
    return 2;
  } catch (const std::exception& e) {
    json report;
    report["error"] = {{"message", e.what()}, {"kind", "internal"}};
    std::cerr << report.dump() << "\n";
    return 1;
  }
}

}  // namespace qdswap
