#include "qdswap/config/scenario_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "qdswap/common/constants.hpp"
#include "qdswap/common/error.hpp"

namespace qdswap {

namespace {

struct RawValue {
  std::string text;                 // scalar (possibly quoted content)
  std::vector<std::string> items;   // list entries (quoted content)
  bool is_list = false;
  bool was_quoted = false;
};

using Section = std::map<std::string, RawValue>;

struct RawConfig {
  std::map<std::string, Section> sections;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_quotes(const std::string& s, bool* quoted) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    if (quoted) *quoted = true;
    return s.substr(1, s.size() - 2);
  }
  if (quoted) *quoted = false;
  return s;
}

RawConfig parse_raw(const std::string& text, const std::string& origin) {
  RawConfig cfg;
  std::string section = "";
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw_invalid(origin + ":" + std::to_string(lineno) + ": unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      cfg.sections[section];
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw_invalid(origin + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw_invalid(origin + ":" + std::to_string(lineno) + ": empty key or value");
    }

    RawValue rv;
    if (value.front() == '[') {
      if (value.back() != ']') {
        throw_invalid(origin + ":" + std::to_string(lineno) + ": unterminated list");
      }
      rv.is_list = true;
      std::string inner = value.substr(1, value.size() - 2);
      std::string item;
      std::istringstream items(inner);
      while (std::getline(items, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        rv.items.push_back(strip_quotes(item, nullptr));
      }
    } else {
      rv.text = strip_quotes(value, &rv.was_quoted);
    }
    cfg.sections[section][key] = rv;
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Typed extraction with unit validation.
// ---------------------------------------------------------------------------

enum class Unit { Picoseconds, MicroEv, KvPerCm, MegaHz, SlopeUevPerKvCm };

const char* unit_name(Unit u) {
  switch (u) {
    case Unit::Picoseconds: return "ps";
    case Unit::MicroEv: return "ueV";
    case Unit::KvPerCm: return "kV/cm";
    case Unit::MegaHz: return "MHz";
    case Unit::SlopeUevPerKvCm: return "ueV/(kV/cm)";
  }
  return "?";
}

bool unit_matches(Unit u, const std::string& token) {
  switch (u) {
    case Unit::Picoseconds: return token == "ps";
    case Unit::MicroEv: return token == "ueV" || token == "µeV" || token == "μeV";
    case Unit::KvPerCm: return token == "kV/cm";
    case Unit::MegaHz: return token == "MHz";
    case Unit::SlopeUevPerKvCm:
      return token == "ueV/(kV/cm)" || token == "µeV/(kV/cm)" || token == "μeV/(kV/cm)";
  }
  return false;
}

class Extractor {
 public:
  Extractor(const RawConfig& cfg, const std::string& origin) : cfg_(cfg), origin_(origin) {}

  [[noreturn]] void fail(const std::string& field, const std::string& why) const {
    throw Error(ErrorKind::InvalidArgument, origin_ + ": field '" + field + "': " + why, field);
  }

  const RawValue* find(const std::string& section, const std::string& key) const {
    const auto s = cfg_.sections.find(section);
    if (s == cfg_.sections.end()) return nullptr;
    const auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    return &k->second;
  }

  const RawValue& require(const std::string& section, const std::string& key) const {
    const RawValue* v = find(section, key);
    if (!v) fail(section + "." + key, "missing");
    return *v;
  }

  double quantity_from_text(const std::string& field, const std::string& text, Unit unit) const {
    std::string t = trim(text);
    if (t == "inf" && unit == Unit::Picoseconds) {
      return std::numeric_limits<double>::infinity();
    }
    // Split the number from the unit token (first whitespace or first
    // non-numeric character).
    size_t pos = 0;
    while (pos < t.size() &&
           (std::isdigit(static_cast<unsigned char>(t[pos])) || t[pos] == '+' || t[pos] == '-' ||
            t[pos] == '.' || t[pos] == 'e' || t[pos] == 'E')) {
      // 'e'/'E' only counts as numeric when followed by digit or sign.
      if ((t[pos] == 'e' || t[pos] == 'E')) {
        if (pos + 1 >= t.size() ||
            !(std::isdigit(static_cast<unsigned char>(t[pos + 1])) || t[pos + 1] == '+' ||
              t[pos + 1] == '-')) {
          break;
        }
      }
      ++pos;
    }
    const std::string num = trim(t.substr(0, pos));
    const std::string unit_token = trim(t.substr(pos));
    if (num.empty()) fail(field, "expected a number with unit suffix");
    if (unit_token.empty()) {
      fail(field, std::string("missing unit suffix, expected ") + unit_name(unit));
    }
    if (!unit_matches(unit, unit_token)) {
      fail(field, "wrong unit '" + unit_token + "', expected " + unit_name(unit));
    }
    try {
      size_t used = 0;
      const double v = std::stod(num, &used);
      if (used != num.size()) fail(field, "malformed number '" + num + "'");
      return v;
    } catch (const std::exception&) {
      fail(field, "malformed number '" + num + "'");
    }
  }

  double quantity(const std::string& section, const std::string& key, Unit unit) const {
    const RawValue& v = require(section, key);
    if (v.is_list) fail(section + "." + key, "expected a scalar quantity");
    return quantity_from_text(section + "." + key, v.text, unit);
  }

  double quantity_or(const std::string& section, const std::string& key, Unit unit,
                     double fallback) const {
    return find(section, key) ? quantity(section, key, unit) : fallback;
  }

  double number(const std::string& section, const std::string& key) const {
    const RawValue& v = require(section, key);
    if (v.is_list || v.was_quoted) fail(section + "." + key, "expected a plain number");
    try {
      size_t used = 0;
      const double d = std::stod(v.text, &used);
      if (used != v.text.size()) fail(section + "." + key, "malformed number");
      return d;
    } catch (const std::exception&) {
      fail(section + "." + key, "malformed number '" + v.text + "'");
    }
  }

  double number_or(const std::string& section, const std::string& key, double fallback) const {
    return find(section, key) ? number(section, key) : fallback;
  }

  std::string word(const std::string& section, const std::string& key) const {
    const RawValue& v = require(section, key);
    if (v.is_list) fail(section + "." + key, "expected a string");
    return v.text;
  }

  std::string word_or(const std::string& section, const std::string& key,
                      const std::string& fallback) const {
    return find(section, key) ? word(section, key) : fallback;
  }

  std::vector<double> quantity_list(const std::string& section, const std::string& key,
                                    Unit unit) const {
    const RawValue& v = require(section, key);
    if (!v.is_list) fail(section + "." + key, "expected a list");
    std::vector<double> out;
    for (size_t i = 0; i < v.items.size(); ++i) {
      out.push_back(quantity_from_text(section + "." + key + "[" + std::to_string(i) + "]",
                                       v.items[i], unit));
    }
    return out;
  }

  std::vector<std::string> word_list(const std::string& section, const std::string& key) const {
    const RawValue& v = require(section, key);
    if (!v.is_list) fail(section + "." + key, "expected a list");
    return v.items;
  }

  bool has(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
  }

 private:
  const RawConfig& cfg_;
  std::string origin_;
};

QdSource parse_source(const Extractor& ex, const std::string& sec) {
  QdSource s;
  s.x_energy_ueV = ex.quantity(sec, "x_energy", Unit::MicroEv);
  s.xx_energy_ueV = ex.quantity(sec, "xx_energy", Unit::MicroEv);
  s.tuning_slope_x = ex.quantity(sec, "tuning_slope_x", Unit::SlopeUevPerKvCm);
  s.tuning_slope_xx = ex.quantity(sec, "tuning_slope_xx", Unit::SlopeUevPerKvCm);
  s.x_lifetime_ps = ex.quantity(sec, "x_lifetime", Unit::Picoseconds);
  s.xx_lifetime_ps = ex.quantity(sec, "xx_lifetime", Unit::Picoseconds);
  s.fss_ueV = ex.quantity(sec, "fss", Unit::MicroEv);
  s.purcell_x = ex.number_or(sec, "purcell_x", 1.0);
  s.purcell_xx = ex.number_or(sec, "purcell_xx", 1.0);
  s.g2_zero = ex.number(sec, "g2_zero");
  s.blinking_on_fraction = ex.number(sec, "blinking_on_fraction");
  s.end_to_end_efficiency_x = ex.number(sec, "end_to_end_efficiency_x");
  s.end_to_end_efficiency_xx = ex.number(sec, "end_to_end_efficiency_xx");
  try {
    s.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::InvalidArgument, "[" + sec + "] " + e.what(), sec);
  }
  return s;
}

std::array<int, 2> parse_pattern(const Extractor& ex, const std::string& field,
                                 const std::string& text) {
  if (text.size() != 2) ex.fail(field, "detector pattern must be two letters, e.g. AB");
  auto idx = [&](char c) {
    if (c < 'A' || c > 'D') ex.fail(field, "unknown detector label in pattern");
    return c - 'A';
  };
  return {idx(text[0]), idx(text[1])};
}

}  // namespace

std::string_view to_string(ScenarioMode m) {
  switch (m) {
    case ScenarioMode::SwapXX: return "swap-xx";
    case ScenarioMode::SwapX: return "swap-x";
    case ScenarioMode::HomX: return "hom-x";
    case ScenarioMode::HomXX: return "hom-xx";
    case ScenarioMode::TomoSource: return "tomo-source";
    case ScenarioMode::Match: return "match";
    case ScenarioMode::Rates: return "rates";
  }
  return "?";
}

ScenarioMode scenario_mode_from_string(const std::string& s) {
  if (s == "swap-xx") return ScenarioMode::SwapXX;
  if (s == "swap-x") return ScenarioMode::SwapX;
  if (s == "hom-x") return ScenarioMode::HomX;
  if (s == "hom-xx") return ScenarioMode::HomXX;
  if (s == "tomo-source") return ScenarioMode::TomoSource;
  if (s == "match") return ScenarioMode::Match;
  if (s == "rates") return ScenarioMode::Rates;
  throw_invalid("unknown scenario mode '" + s + "'", "scenario.mode");
}

SwapScenario ScenarioConfig::make_scenario(ScenarioMode mode_override) const {
  SwapScenario sc;
  sc.source1 = qd1;
  sc.source2 = qd2;
  sc.station = station;
  sc.actuator = actuator;
  sc.field_kV_cm = field_kV_cm;
  sc.windows_ps = windows_ps;
  sc.effective_rep_rate_MHz = effective_rep_rate_MHz;
  sc.resonance_tolerance_ueV = resonance_tolerance_ueV;
  sc.noise = noise;
  sc.pair_generation = pair_generation;
  switch (mode_override) {
    case ScenarioMode::SwapXX:
    case ScenarioMode::HomX:
      sc.bsm_photon = Transition::X;  // swap on XX photons = interfere the X ones
      break;
    case ScenarioMode::SwapX:
    case ScenarioMode::HomXX:
      sc.bsm_photon = Transition::XX;
      break;
    default:
      sc.bsm_photon = Transition::X;
      break;
  }
  return sc;
}

ScenarioConfig parse_config(const std::string& text, const std::string& origin) {
  const RawConfig raw = parse_raw(text, origin);
  Extractor ex(raw, origin);

  ScenarioConfig cfg;
  cfg.schema = static_cast<int>(ex.number_or("", "schema", 1));
  if (cfg.schema != 1) ex.fail("schema", "unsupported schema version");

  cfg.qd1 = parse_source(ex, "qd1");
  cfg.qd2 = parse_source(ex, "qd2");

  cfg.actuator.min_kV_cm = ex.quantity_or("actuator", "min", Unit::KvPerCm, -25.0);
  cfg.actuator.max_kV_cm = ex.quantity_or("actuator", "max", Unit::KvPerCm, 13.75);
  if (cfg.actuator.min_kV_cm >= cfg.actuator.max_kV_cm) {
    ex.fail("actuator.min", "actuator range is empty");
  }

  cfg.station.bs_reflectivity = ex.number_or("station", "bs_reflectivity", 0.5);
  cfg.station.pbs_extinction = ex.number_or("station", "pbs_extinction", 0.0);
  const double jitter_fwhm = ex.quantity_or("station", "detector_jitter_fwhm",
                                            Unit::Picoseconds, 15.0);
  cfg.station.detector_jitter_sigma_ps = jitter_fwhm * kFwhmToSigma;
  if (ex.has("station", "psi_minus_patterns")) {
    cfg.station.psi_minus_patterns.clear();
    for (const auto& p : ex.word_list("station", "psi_minus_patterns")) {
      cfg.station.psi_minus_patterns.push_back(
          parse_pattern(ex, "station.psi_minus_patterns", p));
    }
  }
  if (ex.has("station", "psi_plus_patterns")) {
    cfg.station.psi_plus_patterns.clear();
    for (const auto& p : ex.word_list("station", "psi_plus_patterns")) {
      cfg.station.psi_plus_patterns.push_back(parse_pattern(ex, "station.psi_plus_patterns", p));
    }
  }
  try {
    cfg.station.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("[station] ") + e.what(), "station");
  }

  cfg.noise.dephasing_time_x_ps = ex.quantity_or("noise", "dephasing_time_x", Unit::Picoseconds,
                                                 std::numeric_limits<double>::infinity());
  cfg.noise.dephasing_time_xx_ps = ex.quantity_or(
      "noise", "dephasing_time_xx", Unit::Picoseconds,
      std::numeric_limits<double>::infinity());
  cfg.noise.noise_floor_scale = ex.number_or("noise", "noise_floor_scale", 0.0);

  cfg.mode = scenario_mode_from_string(ex.word_or("scenario", "mode", "swap-xx"));
  cfg.field_kV_cm = ex.quantity_or("scenario", "field", Unit::KvPerCm, 0.0);
  if (ex.has("scenario", "windows")) {
    cfg.windows_ps = ex.quantity_list("scenario", "windows", Unit::Picoseconds);
  } else {
    cfg.windows_ps = {10.0, 20.0, 50.0, 100.0, 200.0,
                      std::numeric_limits<double>::infinity()};
  }
  cfg.effective_rep_rate_MHz = ex.quantity_or("scenario", "rep_rate", Unit::MegaHz, 160.0);
  cfg.resonance_tolerance_ueV =
      ex.quantity_or("scenario", "resonance_tolerance", Unit::MicroEv, 1.0);
  cfg.seed = static_cast<std::uint64_t>(ex.number_or("scenario", "seed", 1.0));
  cfg.pair_generation = ex.number_or("scenario", "pair_generation", 0.9);

  cfg.hom.bin_width_ps = ex.quantity_or("hom", "bin_width", Unit::Picoseconds, 2.0);
  cfg.hom.range_ps = ex.quantity_or("hom", "range", Unit::Picoseconds, 400.0);
  if (ex.has("hom", "windows")) {
    cfg.hom.windows_ps = ex.quantity_list("hom", "windows", Unit::Picoseconds);
  } else {
    cfg.hom.windows_ps = {10.0, 20.0, 50.0, 100.0, std::numeric_limits<double>::infinity()};
  }

  cfg.tomo.flux = ex.number_or("tomo", "flux", 20000.0);
  cfg.tomo.bootstrap_replicas = static_cast<int>(ex.number_or("tomo", "bootstrap_replicas", 100));

  cfg.match.spread_ueV = ex.quantity_or("match", "spread", Unit::MicroEv, 3000.0);
  cfg.match.range_ueV = ex.quantity_or("match", "range", Unit::MicroEv, 500.0);
  cfg.match.samples = static_cast<std::uint64_t>(ex.number_or("match", "samples", 1e6));

  cfg.rates.preset = ex.word_or("rates", "preset", "measured");
  if (cfg.rates.preset != "measured" && cfg.rates.preset != "improved") {
    ex.fail("rates.preset", "expected 'measured' or 'improved'");
  }

  // Validate the assembled scenario once so config errors surface at parse
  // time with exit code 2 rather than deep inside a verb.
  try {
    cfg.make_scenario().validate();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidArgument) throw;
    // Physics-level conditions (e.g. detuned) are verb concerns, not parse
    // errors.
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_invalid("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

}  // namespace qdswap
