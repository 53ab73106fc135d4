#include "sojourn/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "sojourn/csv.hpp"

namespace sojourn {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_double_list(const std::string& value) {
  std::vector<double> out;
  std::istringstream items(value);
  for (std::string item; std::getline(items, item, ',');) out.push_back(parse_double(trim(item)));
  if (out.empty()) throw std::invalid_argument("empty list value");
  return out;
}

std::string format_double_list(std::span<const double> values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ',';
    s += format_double(values[i]);
  }
  return s;
}

std::int64_t parse_count(const std::string& value, const char* what) {
  try {
    const long long v = std::stoll(value);
    if (v < 1) throw std::invalid_argument(what);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(what) + ": need a positive integer, got '" + value +
                                "'");
  }
}

}  // namespace

void apply_config_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  try {
    if (key == "seed") {
      cfg.seed = std::stoull(value);
    } else if (key == "grid") {
      cfg.grid_n = static_cast<int>(parse_count(value, "grid"));
    } else if (key == "paths") {
      cfg.n_paths = parse_count(value, "paths");
    } else if (key == "samples") {
      cfg.n_samples = parse_count(value, "samples");
    } else if (key == "workers") {
      cfg.workers = static_cast<int>(parse_count(value, "workers"));
    } else if (key == "out") {
      cfg.out = value;
    } else if (key == "generator") {
      if (value != "constant" && value != "moving-triangular" && value != "moving-rectangular" &&
          value != "discrete" && value != "logistic")
        throw std::invalid_argument("unknown generator '" + value + "'");
      cfg.generator = value;
    } else if (key == "width") {
      cfg.width = parse_double(value);
    } else if (key == "base") {
      cfg.base = parse_double_list(value);
    } else if (key == "dim") {
      cfg.dim = static_cast<int>(parse_count(value, "dim"));
    } else if (key == "exponent") {
      cfg.exponent = value == "inf" ? std::numeric_limits<double>::infinity() : parse_double(value);
    } else if (key == "s") {
      cfg.s_values = parse_double_list(value);
      for (double s : cfg.s_values)
        if (!(s > 0.0)) throw std::invalid_argument("s values must be > 0");
    } else if (key == "f") {
      if (value != "const-neg1" && value != "ramp" && value != "ramp2" &&
          value.rfind("file:", 0) != 0)
        throw std::invalid_argument("unknown threshold shape '" + value + "'");
      cfg.f_shape = value;
    } else if (key == "t0") {
      cfg.t0 = parse_double(value);
      if (!(cfg.t0 >= 0.0 && cfg.t0 < 1.0)) throw std::invalid_argument("t0 must lie in [0,1)");
    } else if (key == "y-points") {
      cfg.y_points = static_cast<int>(parse_count(value, "y-points"));
    } else if (key == "u-points") {
      cfg.u_points = value == "grid" ? 0 : static_cast<int>(parse_count(value, "u-points"));
    } else if (key == "margin") {
      MarginSpec::from_name(value);  // validates
      cfg.margin = value;
    } else if (key == "process") {
      if (value != "gpp" && value != "msp" && value != "perturbed-exp" &&
          value != "perturbed-uniform")
        throw std::invalid_argument("unknown process '" + value + "'");
      cfg.process = value;
    } else if (key == "eps-trunc") {
      cfg.eps_trunc = parse_double(value);
      if (!(cfg.eps_trunc > 0.0)) throw std::invalid_argument("eps-trunc must be > 0");
    } else if (key == "clip-floor") {
      if (value == "auto")
        cfg.clip_floor.reset();
      else
        cfg.clip_floor = parse_double(value);
    } else if (key == "floor") {
      cfg.min_exceedances = static_cast<int>(parse_count(value, "floor"));
    } else if (key == "scale") {
      cfg.scale = parse_double(value);
      if (!(cfg.scale > 0.0)) throw std::invalid_argument("scale must be > 0");
    } else if (key == "json") {
      if (value != "0" && value != "1") throw std::invalid_argument("json: use 0 or 1");
      cfg.json_summary = value == "1";
    } else {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad value for config key '" + key + "': '" + value + "'");
  }
}

void load_config_file(ExperimentConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path.string());
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) +
                                  ": expected key=value");
    apply_config_key(cfg, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
}

std::vector<std::pair<std::string, std::string>> resolved_config(const ExperimentConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("seed", std::to_string(cfg.seed));
  kv.emplace_back("grid", std::to_string(cfg.grid_n));
  kv.emplace_back("paths", std::to_string(cfg.n_paths));
  kv.emplace_back("samples", std::to_string(cfg.n_samples));
  kv.emplace_back("workers", std::to_string(cfg.workers));
  kv.emplace_back("generator", cfg.generator);
  if (cfg.generator == "moving-triangular" || cfg.generator == "moving-rectangular")
    kv.emplace_back("width", format_double(cfg.width));
  if (cfg.generator == "discrete") kv.emplace_back("base", format_double_list(cfg.base));
  if (cfg.generator == "logistic") {
    kv.emplace_back("dim", std::to_string(cfg.dim));
    kv.emplace_back("exponent",
                    std::isinf(cfg.exponent) ? std::string("inf") : format_double(cfg.exponent));
  }
  kv.emplace_back("s", format_double_list(cfg.s_values));
  kv.emplace_back("f", cfg.f_shape);
  kv.emplace_back("t0", format_double(cfg.t0));
  kv.emplace_back("y-points", std::to_string(cfg.y_points));
  kv.emplace_back("u-points", cfg.u_points == 0 ? std::string("grid")
                                                : std::to_string(cfg.u_points));
  kv.emplace_back("margin", cfg.margin);
  kv.emplace_back("process", cfg.process);
  kv.emplace_back("eps-trunc", format_double(cfg.eps_trunc));
  kv.emplace_back("clip-floor",
                  cfg.clip_floor ? format_double(*cfg.clip_floor) : std::string("auto"));
  kv.emplace_back("floor", std::to_string(cfg.min_exceedances));
  kv.emplace_back("scale", format_double(cfg.scale));
  kv.emplace_back("json", cfg.json_summary ? "1" : "0");
  return kv;
}

GeneratorSpec generator_from_config(const ExperimentConfig& cfg) {
  GeneratorSpec spec;
  if (cfg.generator == "constant")
    spec = ConstantGenerator{};
  else if (cfg.generator == "moving-triangular")
    spec = MovingKernelGenerator{KernelShape::Triangular, cfg.width};
  else if (cfg.generator == "moving-rectangular")
    spec = MovingKernelGenerator{KernelShape::Rectangular, cfg.width};
  else if (cfg.generator == "discrete")
    spec = DiscreteInterpolatedGenerator{cfg.base};
  else
    spec = LogisticFrechetGenerator{cfg.dim, cfg.exponent};
  validate(spec);
  return spec;
}

GridFunction threshold_shape_from_config(const ExperimentConfig& cfg, const Grid& grid) {
  if (cfg.f_shape.rfind("file:", 0) == 0) {
    const std::filesystem::path path = cfg.f_shape.substr(5);
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open threshold file " + path.string());
    std::vector<double> v;
    std::string line;
    while (std::getline(in, line)) {
      const std::string t = trim(line);
      if (t.empty() || t[0] == '#') continue;
      for (const auto& cell : split_csv_line(t)) v.push_back(parse_double(trim(cell)));
    }
    if (std::cmp_not_equal(v.size(), grid.size()))
      throw std::invalid_argument("threshold file " + path.string() + " has " +
                                  std::to_string(v.size()) + " values, grid needs " +
                                  std::to_string(grid.size()));
    return GridFunction(grid, std::move(v));
  }
  std::vector<double> v(static_cast<std::size_t>(grid.size()));
  for (int j = 0; j < grid.size(); ++j) {
    const double t = grid.point(j);
    v[static_cast<std::size_t>(j)] = cfg.f_shape == "const-neg1" ? -1.0
                                     : cfg.f_shape == "ramp"     ? t - 1.0
                                                                 : t - 2.0;
  }
  return GridFunction(grid, std::move(v));
}

MarginSpec margin_from_config(const ExperimentConfig& cfg) {
  return MarginSpec::from_name(cfg.margin);
}

}  // namespace sojourn
