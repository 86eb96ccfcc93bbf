#pragma once

#include "latcell/energy.hpp"
#include "latcell/scene.hpp"

#include <optional>
#include <string>

namespace latcell::cli {

/// Command-line settings layered over the scene file before parsing.
struct Overrides {
  std::optional<int> threads;
  std::optional<int> quad_order;
  std::optional<std::string> boundary;
  std::optional<std::string> format;
  std::optional<double> theta;
};

scene::Scene load_effective_scene(const std::string& path, const Overrides& ov);

energy::DensityTable build_density_table(const scene::Scene& s);

void cmd_density(const scene::Scene& s, const std::string& out_path);
void cmd_expand(const scene::Scene& s, const std::string& proposition,
                const std::string& out_path);
void cmd_miller(const scene::Scene& s, int j_max, const std::string& out_path);
void cmd_remainder(const scene::Scene& s, const std::string& out_path);
void cmd_oracle(const scene::Scene& s, int grid, const std::string& out_path);

/// Full argument parsing and dispatch; returns the process exit code
/// (0 ok, 1 numerical failure, 2 validation failure).
int run_main(int argc, char** argv);

}  // namespace latcell::cli
