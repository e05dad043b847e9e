#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qdswap/swap/scenario.hpp"

namespace qdswap {

enum class ScenarioMode { SwapXX, SwapX, HomX, HomXX, TomoSource, Match, Rates };

std::string_view to_string(ScenarioMode m);
ScenarioMode scenario_mode_from_string(const std::string& s);

struct HomConfigBlock {
  double bin_width_ps = 2.0;
  double range_ps = 400.0;
  std::vector<double> windows_ps;  // visibility table windows
};

struct TomoConfigBlock {
  double flux = 20000.0;
  int bootstrap_replicas = 100;
};

struct MatchConfigBlock {
  double spread_ueV = 3000.0;
  double range_ueV = 500.0;
  std::uint64_t samples = 1000000;
};

struct RatesConfigBlock {
  std::string preset = "measured";  // "measured" or "improved"
};

/// Full parsed configuration: the two sources, station, noise calibration,
/// scenario selection and per-verb blocks. Values carry explicit unit
/// suffixes in the file (ps, ueV, kV/cm, MHz) which are validated per field.
struct ScenarioConfig {
  int schema = 1;
  QdSource qd1;
  QdSource qd2;
  ActuatorRange actuator;
  BsmStation station;
  NoiseModel noise;
  ScenarioMode mode = ScenarioMode::SwapXX;
  double field_kV_cm = 0.0;
  std::vector<double> windows_ps;
  double effective_rep_rate_MHz = 160.0;
  double resonance_tolerance_ueV = 1.0;
  std::uint64_t seed = 1;
  double pair_generation = 0.9;
  HomConfigBlock hom;
  TomoConfigBlock tomo;
  MatchConfigBlock match;
  RatesConfigBlock rates;

  /// Swap scenario for the configured (or overridden) mode; only meaningful
  /// for the swap/hom/tomo-source modes.
  SwapScenario make_scenario(ScenarioMode mode_override) const;
  SwapScenario make_scenario() const { return make_scenario(mode); }
};

/// Parses and validates a configuration file; throws Error with the offending
/// field on malformed input (missing unit suffix, wrong unit, bad value).
ScenarioConfig load_config(const std::string& path);

/// Parses configuration text (same grammar as load_config).
ScenarioConfig parse_config(const std::string& text, const std::string& origin = "<string>");

}  // namespace qdswap
