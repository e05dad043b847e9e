#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qdswap/cli/runner.hpp"
#include "qdswap/io/outputs.hpp"
#include "qdswap/quantum/two_qubit.hpp"

using namespace qdswap;
namespace fs = std::filesystem;

namespace {

std::string config_path() { return std::string(QDSWAP_CONFIG_DIR) + "/measured.toml"; }

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "qdswap_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("match verb writes a deterministic artifact") {
  const fs::path dir_a = fresh_dir("match_a");
  const fs::path dir_b = fresh_dir("match_b");
  RunOptions opt;
  opt.verb = "match";
  opt.config_path = config_path();
  opt.out_dir = dir_a.string();
  REQUIRE(run(opt) == 0);
  opt.out_dir = dir_b.string();
  REQUIRE(run(opt) == 0);

  // Byte-identical outputs for identical seed + config.
  CHECK(read_file(dir_a / "match.json") == read_file(dir_b / "match.json"));

  const auto j = nlohmann::json::parse(read_file(dir_a / "match.json"));
  CHECK(j["probability"].get<double>() > 0.0);
  CHECK(j["probability"].get<double>() < 1.0);
}

TEST_CASE("rates verb emits both presets") {
  const fs::path dir = fresh_dir("rates");
  RunOptions opt;
  opt.verb = "rates";
  opt.config_path = config_path();
  opt.out_dir = dir.string();
  REQUIRE(run(opt) == 0);

  const auto j = nlohmann::json::parse(read_file(dir / "rates.json"));
  CHECK(j["measured"]["p_swap"].get<double>() > 0.0);
  CHECK(j["improved"]["p_swap"].get<double>() > j["measured"]["p_swap"].get<double>());

  const std::string csv = read_file(dir / "rates.csv");
  CHECK(csv.find("# qdswap v1") == 0);
  CHECK(csv.find("preset,factor,value") != std::string::npos);
  CHECK(csv.find("blinking_on_1") != std::string::npos);
}

TEST_CASE("source verb emits physical matrices and resonance fields") {
  const fs::path dir = fresh_dir("source");
  RunOptions opt;
  opt.verb = "source";
  opt.config_path = config_path();
  opt.out_dir = dir.string();
  REQUIRE(run(opt) == 0);

  const auto j = nlohmann::json::parse(read_file(dir / "source.json"));
  for (const char* dot : {"qd1", "qd2"}) {
    const DensityMatrix2Q rho = density_matrix_from_json(j[dot]["pair_density_matrix"]);
    CHECK(fully_entangled_fraction(rho) > 0.5);
  }
  CHECK(j["resonance_field_kV_cm"]["X"].get<double>() == doctest::Approx(-9.3).epsilon(1e-6));
  CHECK(j["resonance_field_kV_cm"]["XX"].get<double>() == doctest::Approx(-11.3).epsilon(1e-6));
}

TEST_CASE("unknown verb and bad config map to exit code 2") {
  RunOptions opt;
  opt.verb = "nonsense";
  opt.config_path = config_path();
  opt.out_dir = fresh_dir("bad").string();
  CHECK(run(opt) == 2);

  opt.verb = "match";
  opt.config_path = "/nonexistent/config.toml";
  CHECK(run(opt) == 2);
}

TEST_CASE("malformed unit in config maps to exit code 2") {
  const fs::path dir = fresh_dir("badcfg");
  const fs::path cfg = dir / "bad.toml";
  std::string text = read_file(config_path());
  const auto pos = text.find("\"25 ps\"");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 7, "\"25 s\"");
  std::ofstream(cfg) << text;

  RunOptions opt;
  opt.verb = "source";
  opt.config_path = cfg.string();
  opt.out_dir = dir.string();
  CHECK(run(opt) == 2);
}

TEST_CASE("swap verb outputs are byte-identical across runs") {
  // Trim the window list so the repeated run stays quick.
  const fs::path dir = fresh_dir("swap_repro");
  const fs::path cfg = dir / "cfg.toml";
  std::string text = read_file(config_path());
  const auto wpos = text.find("windows = [");
  REQUIRE(wpos != std::string::npos);
  text.replace(wpos, text.find(']', wpos) - wpos + 1, "windows = [\"20 ps\", \"inf\"]");
  std::ofstream(cfg) << text;

  RunOptions opt;
  opt.verb = "swap";
  opt.config_path = cfg.string();
  opt.out_dir = (dir / "a").string();
  REQUIRE(run(opt) == 0);
  opt.out_dir = (dir / "b").string();
  REQUIRE(run(opt) == 0);

  CHECK(read_file(dir / "a" / "swap_fidelity.csv") == read_file(dir / "b" / "swap_fidelity.csv"));
  CHECK(read_file(dir / "a" / "swap_windows.json") ==
        read_file(dir / "b" / "swap_windows.json"));
}

TEST_CASE("tomo verb reconstructs from a count-table CSV") {
  const fs::path dir = fresh_dir("tomo_csv");
  // Counts for a perfect PsiMinus at high flux: 36 analyzer pairs.
  const fs::path table = dir / "counts.csv";
  {
    std::ofstream out(table);
    out << "setting_arm1,setting_arm2,counts\n";
    const DensityMatrix2Q rho = DensityMatrix2Q::from_pure(bell_state(BellLabel::PsiMinus));
    const char* names[] = {"H", "V", "D", "A", "R", "L"};
    const Eigen::Vector2cd states[] = {
        {1, 0}, {0, 1},
        {1 / std::sqrt(2.0), 1 / std::sqrt(2.0)},
        {1 / std::sqrt(2.0), -1 / std::sqrt(2.0)},
        {1 / std::sqrt(2.0), Complex(0, -1 / std::sqrt(2.0))},
        {1 / std::sqrt(2.0), Complex(0, 1 / std::sqrt(2.0))}};
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) {
        Vector4c joint;
        joint << states[i](0) * states[j](0), states[i](0) * states[j](1),
            states[i](1) * states[j](0), states[i](1) * states[j](1);
        const double p = std::real(joint.dot(rho.matrix() * joint));
        out << names[i] << "," << names[j] << ","
            << static_cast<long long>(std::llround(1e6 * p)) << "\n";
      }
    }
  }

  RunOptions opt;
  opt.verb = "tomo";
  opt.config_path = config_path();
  opt.out_dir = dir.string();
  opt.tomo_counts_path = table.string();
  REQUIRE(run(opt) == 0);

  const auto j = nlohmann::json::parse(read_file(dir / "tomo.json"));
  const DensityMatrix2Q rec = density_matrix_from_json(j["rho"]);
  CHECK(fidelity_to_bell(rec, BellLabel::PsiMinus) > 0.999);
  CHECK(j["summary"]["best_bell_label"].get<std::string>() == "psi_minus");
  CHECK(j["fef_bootstrap"]["stddev"].get<double>() < 0.01);
}

TEST_CASE("detuned swap maps to exit code 3 unless overridden") {
  const fs::path dir = fresh_dir("detuned");
  const fs::path cfg = dir / "detuned.toml";
  std::string text = read_file(config_path());
  const auto pos = text.find("field = \"-9.3 kV/cm\"");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, std::string("field = \"-9.3 kV/cm\"").size(), "field = \"0 kV/cm\"");
  // Keep the run fast: a single window.
  const auto wpos = text.find("windows = [\"5 ps\", \"10 ps\", \"20 ps\", \"50 ps\", \"100 ps\", "
                              "\"200 ps\", \"inf\"]");
  REQUIRE(wpos != std::string::npos);
  text.replace(wpos, text.find(']', wpos) - wpos + 1, "windows = [\"inf\"]");
  std::ofstream(cfg) << text;

  RunOptions opt;
  opt.verb = "swap";
  opt.config_path = cfg.string();
  opt.out_dir = dir.string();
  CHECK(run(opt) == 3);

  opt.allow_detuned = true;
  CHECK(run(opt) == 0);
  const auto j = nlohmann::json::parse(read_file(dir / "swap_windows.json"));
  const double fef = j["windows"][0]["psi_minus"]["summary"]["fef"].get<double>();
  CHECK(fef <= 0.55);  // no entanglement on the detuned control
}
