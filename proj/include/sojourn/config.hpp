#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sojourn/generators.hpp"
#include "sojourn/grid.hpp"
#include "sojourn/margins.hpp"

namespace sojourn {

// Flat key=value experiment description shared by every CLI command.
struct ExperimentConfig {
  std::uint64_t seed = 20260823ULL;
  int grid_n = 200;
  std::int64_t n_paths = 100000;
  std::int64_t n_samples = 100000;
  int workers = 1;
  std::string out;  // empty -> "<command>.csv"
  std::string generator = "moving-triangular";
  double width = 0.25;
  std::vector<double> base = {2.0, 0.0};
  int dim = 4;
  double exponent = 2.0;
  std::vector<double> s_values = {0.01};
  std::string f_shape = "const-neg1";
  double t0 = 0.25;
  int y_points = 101;
  int u_points = 0;  // 0 -> grid-aligned mesh
  std::string margin = "uniform01";
  std::string process = "gpp";
  double eps_trunc = 1e-4;
  std::optional<double> clip_floor;  // nullopt -> -1e6 / generator constant
  int min_exceedances = 100;
  double scale = 1.0;
  bool json_summary = false;
};

// throws std::invalid_argument on unknown keys or unparseable values
void apply_config_key(ExperimentConfig& cfg, const std::string& key, const std::string& value);
void load_config_file(ExperimentConfig& cfg, const std::filesystem::path& path);

// stable key order, values round-tripping through apply_config_key
std::vector<std::pair<std::string, std::string>> resolved_config(const ExperimentConfig& cfg);

GeneratorSpec generator_from_config(const ExperimentConfig& cfg);
// threshold shape presets: const-neg1 (f=-1), ramp (f=t-1), ramp2 (f=t-2),
// file:PATH (one value per grid point, csv or line separated)
GridFunction threshold_shape_from_config(const ExperimentConfig& cfg, const Grid& grid);
MarginSpec margin_from_config(const ExperimentConfig& cfg);

}  // namespace sojourn
