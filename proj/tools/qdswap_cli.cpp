#include <CLI11.hpp>

#include "qdswap/cli/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"qdswap: entanglement-swapping simulator for remote quantum-dot pair sources"};
  app.require_subcommand(1);

  qdswap::RunOptions options;
  std::uint64_t seed = 0;
  std::uint64_t shots = 0;
  std::string mode;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", options.config_path, "scenario configuration file")->required();
    cmd->add_option("--out-dir", options.out_dir, "output directory (default: .)");
    cmd->add_option("--seed", seed, "override the config seed");
    cmd->add_option("--threads", options.threads, "worker threads (results are unaffected)");
    cmd->add_flag("--allow-detuned", options.allow_detuned,
                  "run the detuned control instead of failing");
    return cmd;
  };

  add_common(app.add_subcommand("source", "per-dot pair characterization"));
  auto* hom = add_common(app.add_subcommand("hom", "two-photon interference histograms"));
  hom->add_option("--mode", mode, "hom-x or hom-xx");
  auto* swap = add_common(app.add_subcommand("swap", "entanglement swapping versus window"));
  swap->add_option("--mode", mode, "swap-xx or swap-x");
  swap->add_option("--shots", shots, "also run the Monte Carlo oracle with this budget");
  auto* tomo = add_common(app.add_subcommand("tomo", "two-qubit state tomography"));
  tomo->add_option("--mode", mode, "closed-loop scenario variant");
  tomo->add_option("--counts", options.tomo_counts_path,
                   "count-table CSV (setting_arm1,setting_arm2,counts)");
  add_common(app.add_subcommand("rates", "swapping rate budget"));
  auto* match = add_common(app.add_subcommand("match", "pair-matching probability"));
  match->add_option("--shots", shots, "Monte Carlo sample budget (overrides the config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // command-line errors share the config-error exit code
  }

  auto counted = [](const CLI::App* cmd, const std::string& name) {
    const CLI::Option* opt = cmd->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  for (auto* cmd : app.get_subcommands()) {
    options.verb = cmd->get_name();
    if (counted(cmd, "--seed")) options.seed = seed;
    if (counted(cmd, "--mode")) options.mode = mode;
    if (counted(cmd, "--shots")) options.shots = shots;
  }
  return qdswap::run(options);
}
