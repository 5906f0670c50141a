// Command-line driver: run <config-file> [--seed N] [--out DIR] [--override key=value]...
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 1 anything else (I/O, usage).

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cellforce/config.hpp"
#include "cellforce/experiment.hpp"

namespace {

void print_summary(const cellforce::RunRecord& rec) {
  std::cout << "kind " << cellforce::to_string(rec.config.kind) << ", seed " << rec.config.seed << '\n';
  for (const auto& r : rec.rows) {
    std::printf("  %-12s h=%-9.6g cell %8.4f%%  omega_w %8.4f%%  wall %.1f ms\n", r.approach.c_str(), r.h,
                r.cell_area_red_pct, r.omega_w_area_red_pct, r.wall_ms);
  }
  for (const auto& s : rec.point_study) std::printf("  point  h=%-9.6g energy %.10g\n", s.h, s.energy);
  for (const auto& s : rec.hole_study) std::printf("  hole   h=%-9.6g energy %.10g\n", s.h, s.energy);
  for (const auto& p : rec.artifacts) std::cout << "  wrote " << p.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cell traction finite element experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<long long> seed;
  std::optional<std::string> out_dir;
  std::vector<std::string> overrides;

  CLI::App* run_cmd = app.add_subcommand("run", "Run the experiment described by a config file");
  run_cmd->add_option("config", config_path, "Config file (key = value lines, [section] headers)")->required();
  run_cmd->add_option("--seed", seed, "Random seed (overrides the config)");
  run_cmd->add_option("--out", out_dir, "Output directory (overrides the config)");
  run_cmd->add_option("--override", overrides, "Extra key=value setting; may be repeated");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    std::vector<std::string> all = overrides;
    if (seed) all.push_back("seed=" + std::to_string(*seed));
    if (out_dir) all.push_back("out_dir=" + *out_dir);
    const cellforce::ExperimentConfig config = cellforce::load_config(config_path, all);
    const cellforce::RunRecord rec = cellforce::run(config);
    print_summary(rec);
    return 0;
  } catch (const cellforce::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const cellforce::Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
