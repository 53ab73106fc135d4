#include "sojourn/processes.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "sojourn/csv.hpp"
#include "sojourn/version.hpp"

namespace sojourn {

namespace {

const char* kind_name(ProcessKind k) {
  switch (k) {
    case ProcessKind::Gpp: return "gpp";
    case ProcessKind::Msp: return "msp";
    case ProcessKind::SimpleMsp: return "simple-msp";
    case ProcessKind::PerturbedGpp: return "perturbed-gpp";
  }
  return "";
}

ProcessKind kind_from_name(const std::string& s) {
  if (s == "gpp") return ProcessKind::Gpp;
  if (s == "msp") return ProcessKind::Msp;
  if (s == "simple-msp") return ProcessKind::SimpleMsp;
  if (s == "perturbed-gpp") return ProcessKind::PerturbedGpp;
  throw std::invalid_argument("unknown process kind '" + s + "'");
}

const char* perturbation_name(PerturbationDf p) {
  return p == PerturbationDf::Uniform01 ? "uniform01" : "std-exponential";
}

PerturbationDf perturbation_from_name(const std::string& s) {
  if (s == "uniform01") return PerturbationDf::Uniform01;
  if (s == "std-exponential") return PerturbationDf::StdExponential;
  throw std::invalid_argument("unknown perturbation '" + s + "'");
}

struct MaxAccumulator {
  double value = 0.0;
  void merge(const MaxAccumulator& o) { value = std::max(value, o.value); }
};

void check_counts(std::size_t n_paths) {
  if (n_paths == 0) throw std::invalid_argument("path ensemble: need at least one path");
}

void check_clip_floor(double clip_floor) {
  // <= -1 keeps the exact tail region (-1/m, 0) of every generator unclipped
  if (!(clip_floor <= -1.0))
    throw std::invalid_argument("clip_floor must be <= -1");
}

PathEnsemble sample_ratio_process(ProcessKind kind, const GeneratorSpec& spec,
                                  PerturbationDf perturbation, const Grid& grid,
                                  std::size_t n_paths, RandomStream stream, double clip_floor,
                                  const ExecPolicy& exec, std::uint64_t first_path,
                                  std::uint64_t seed_tag) {
  validate(spec);
  check_counts(n_paths);
  check_clip_floor(clip_floor);
  const GeneratorSampler sampler(spec, grid);
  const auto n = static_cast<std::size_t>(grid.size());
  std::vector<double> values(n_paths * n);

  parallel_for_blocks(static_cast<std::int64_t>(n_paths), exec,
                      [&](std::int64_t begin, std::int64_t end) {
                        std::vector<double> z(n);
                        for (std::int64_t i = begin; i < end; ++i) {
                          RandomStream rs =
                              stream.substream(first_path + static_cast<std::uint64_t>(i));
                          const double w = perturbation == PerturbationDf::Uniform01
                                               ? rs.uniform01()
                                               : rs.exponential();
                          sampler.sample(rs, z);
                          double* row = values.data() + static_cast<std::size_t>(i) * n;
                          for (std::size_t j = 0; j < n; ++j)
                            row[j] = z[j] > 0.0 ? std::max(-w / z[j], clip_floor) : clip_floor;
                        }
                      });

  EnsembleDescriptor desc;
  desc.kind = kind;
  desc.generator = spec;
  desc.seed = seed_tag;
  desc.first_path = first_path;
  desc.clip_floor = clip_floor;
  desc.margin = kind == ProcessKind::Gpp ? "standard-gpp" : "perturbed-gpp";
  if (kind == ProcessKind::PerturbedGpp) desc.perturbation = perturbation;
  return PathEnsemble(grid, n_paths, std::move(values), desc, 0.0);
}

PathEnsemble sample_msp_impl(ProcessKind kind, const GeneratorSpec& spec, const Grid& grid,
                             std::size_t n_paths, RandomStream stream,
                             std::optional<double> trunc_epsilon, const ExecPolicy& exec,
                             std::uint64_t first_path, std::uint64_t seed_tag) {
  validate(spec);
  check_counts(n_paths);
  const bool bounded = is_bounded(spec);
  if (!bounded && !trunc_epsilon)
    throw std::invalid_argument("sample_msp: unbounded generator needs trunc_epsilon");
  if (!bounded && !(*trunc_epsilon > 0.0))
    throw std::invalid_argument("sample_msp: trunc_epsilon must be > 0");

  const GeneratorSampler sampler(spec, grid);
  const auto n = static_cast<std::size_t>(grid.size());
  std::vector<double> values(n_paths * n);

  const double bound = analytic_constant(spec);
  double tail_dim = 0.0, tail_scale = 0.0, tail_p = 0.0;
  if (!bounded) {
    const auto& lf = std::get<LogisticFrechetGenerator>(spec);
    tail_dim = static_cast<double>(lf.dim);
    tail_p = lf.exponent;
    // anchors are Frechet(p)/tgamma(1-1/p): P(anchor > u) <= (u*tgamma)^-p
    tail_scale = std::tgamma(1.0 - 1.0 / tail_p);
  }

  auto worst = parallel_reduce<MaxAccumulator>(
      static_cast<std::int64_t>(n_paths), exec, [] { return MaxAccumulator{}; },
      [&](std::int64_t begin, std::int64_t end, MaxAccumulator& acc) {
        std::vector<double> z(n);
        for (std::int64_t i = begin; i < end; ++i) {
          RandomStream rs = stream.substream(first_path + static_cast<std::uint64_t>(i));
          double* row = values.data() + static_cast<std::size_t>(i) * n;
          std::fill(row, row + n, 0.0);
          double gamma = 0.0;
          double path_bound = 0.0;
          for (long terms = 0;; ++terms) {
            if (terms > 10'000'000)
              throw std::runtime_error("sample_msp: Poisson series failed to stop");
            gamma += rs.exponential();
            sampler.sample(rs, z);
            double r = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < n; ++j) {
              row[j] = std::max(row[j], z[j] / gamma);
              r = std::min(r, row[j]);
            }
            if (r <= 0.0) continue;
            if (bounded) {
              // no later term can reach the current running maximum anywhere
              if (bound / gamma <= r) break;
            } else {
              // union bound on any later term altering any grid value
              const double b = tail_dim * std::pow(r * tail_scale * gamma, -tail_p) * gamma /
                               (tail_p - 1.0);
              if (b <= *trunc_epsilon) {
                path_bound = b;
                break;
              }
            }
          }
          acc.value = std::max(acc.value, path_bound);
          if (kind == ProcessKind::Msp)
            for (std::size_t j = 0; j < n; ++j) row[j] = -1.0 / row[j];
        }
      });

  EnsembleDescriptor desc;
  desc.kind = kind;
  desc.generator = spec;
  desc.seed = seed_tag;
  desc.first_path = first_path;
  desc.clip_floor = -std::numeric_limits<double>::infinity();
  if (!bounded) desc.trunc_epsilon = trunc_epsilon;
  desc.margin = kind == ProcessKind::Msp ? "standard-msp" : "frechet";
  return PathEnsemble(grid, n_paths, std::move(values), desc, worst.value);
}

}  // namespace

PathEnsemble::PathEnsemble(Grid grid, std::size_t n_paths, std::vector<double> values,
                           EnsembleDescriptor descriptor, double truncation_bound)
    : grid_(grid),
      n_paths_(n_paths),
      values_(std::move(values)),
      descriptor_(std::move(descriptor)),
      truncation_bound_(truncation_bound) {
  if (values_.size() != n_paths_ * static_cast<std::size_t>(grid_.size()))
    throw std::invalid_argument("PathEnsemble: value count mismatch");
  check_counts(n_paths_);
}

std::span<const double> PathEnsemble::path(std::size_t i) const {
  const auto n = static_cast<std::size_t>(grid_.size());
  return {values_.data() + i * n, n};
}

double default_clip_floor(const GeneratorSpec& spec) {
  return -1e6 / analytic_constant(spec);
}

PathEnsemble sample_gpp(const GeneratorSpec& spec, const Grid& grid, std::size_t n_paths,
                        RandomStream stream, double clip_floor, const ExecPolicy& exec,
                        std::uint64_t first_path) {
  return sample_ratio_process(ProcessKind::Gpp, spec, PerturbationDf::Uniform01, grid, n_paths,
                              stream, clip_floor, exec, first_path, stream.key());
}

PathEnsemble sample_perturbed_gpp(const GeneratorSpec& spec, PerturbationDf perturbation,
                                  const Grid& grid, std::size_t n_paths, RandomStream stream,
                                  double clip_floor, const ExecPolicy& exec,
                                  std::uint64_t first_path) {
  return sample_ratio_process(ProcessKind::PerturbedGpp, spec, perturbation, grid, n_paths, stream,
                              clip_floor, exec, first_path, stream.key());
}

PathEnsemble sample_msp(const GeneratorSpec& spec, const Grid& grid, std::size_t n_paths,
                        RandomStream stream, std::optional<double> trunc_epsilon,
                        const ExecPolicy& exec, std::uint64_t first_path) {
  return sample_msp_impl(ProcessKind::Msp, spec, grid, n_paths, stream, trunc_epsilon, exec,
                         first_path, stream.key());
}

PathEnsemble sample_simple_msp(const GeneratorSpec& spec, const Grid& grid, std::size_t n_paths,
                               RandomStream stream, std::optional<double> trunc_epsilon,
                               const ExecPolicy& exec, std::uint64_t first_path) {
  return sample_msp_impl(ProcessKind::SimpleMsp, spec, grid, n_paths, stream, trunc_epsilon, exec,
                         first_path, stream.key());
}

PathEnsemble regenerate_ensemble(const EnsembleDescriptor& desc, const Grid& grid,
                                 std::size_t n_paths, const ExecPolicy& exec) {
  const char* native = kind_name(desc.kind);
  const std::string native_margin = desc.kind == ProcessKind::Gpp          ? "standard-gpp"
                                    : desc.kind == ProcessKind::Msp        ? "standard-msp"
                                    : desc.kind == ProcessKind::SimpleMsp ? "frechet"
                                                                           : "perturbed-gpp";
  if (desc.margin != native_margin)
    throw std::invalid_argument(std::string("regenerate_ensemble: ") + native +
                                " ensemble was margin-transformed; cannot regenerate");
  RandomStream stream = RandomStream::from_key(desc.seed);
  switch (desc.kind) {
    case ProcessKind::Gpp:
      return sample_gpp(desc.generator, grid, n_paths, stream, desc.clip_floor, exec,
                        desc.first_path);
    case ProcessKind::PerturbedGpp:
      if (!desc.perturbation)
        throw std::invalid_argument("regenerate_ensemble: perturbation missing");
      return sample_perturbed_gpp(desc.generator, *desc.perturbation, grid, n_paths, stream,
                                  desc.clip_floor, exec, desc.first_path);
    case ProcessKind::Msp:
      return sample_msp(desc.generator, grid, n_paths, stream, desc.trunc_epsilon, exec,
                        desc.first_path);
    case ProcessKind::SimpleMsp:
      return sample_simple_msp(desc.generator, grid, n_paths, stream, desc.trunc_epsilon, exec,
                               desc.first_path);
  }
  throw std::invalid_argument("regenerate_ensemble: unknown kind");
}

double ensemble_cdf(const EnsembleDescriptor& desc, double x) {
  if (desc.margin == "standard-gpp") return std::clamp(1.0 + x, 0.0, 1.0);
  if (desc.margin == "standard-msp") return std::exp(std::min(x, 0.0));
  if (desc.margin == "frechet") return x <= 0.0 ? 0.0 : std::exp(-1.0 / x);
  if (desc.margin == "perturbed-gpp")
    throw std::invalid_argument("perturbed-gpp margins have no closed form");
  return MarginSpec::from_name(desc.margin).cdf(x);
}

bool has_exact_margins(const EnsembleDescriptor& desc) { return desc.margin != "perturbed-gpp"; }

PathEnsemble transform_margins(const PathEnsemble& ensemble, const MarginSpec& target) {
  const auto& desc = ensemble.descriptor();
  if (!has_exact_margins(desc))
    throw std::invalid_argument("transform_margins: source margins not known in closed form");
  std::vector<double> values(ensemble.values().begin(), ensemble.values().end());
  for (auto& v : values) v = target.quantile(ensemble_cdf(desc, v));
  EnsembleDescriptor out = desc;
  out.margin = std::string(target.name());
  return PathEnsemble(ensemble.grid(), ensemble.n_paths(), std::move(values), out,
                      ensemble.truncation_bound());
}

void write_ensemble_csv(const PathEnsemble& ensemble, const std::filesystem::path& csv_path,
                        const std::filesystem::path& meta_path) {
  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot open " + csv_path.string());
  CsvWriter w(csv);
  const Grid& grid = ensemble.grid();
  std::vector<std::string> head;
  head.reserve(static_cast<std::size_t>(grid.size()));
  for (int j = 0; j < grid.size(); ++j) head.push_back("t=" + format_double(grid.point(j)));
  w.header(head);
  for (std::size_t i = 0; i < ensemble.n_paths(); ++i) w.row(ensemble.path(i));

  const auto& d = ensemble.descriptor();
  std::ofstream meta(meta_path);
  if (!meta) throw std::runtime_error("cannot open " + meta_path.string());
  meta << "version=" << kVersion << "\n";
  meta << "kind=" << kind_name(d.kind) << "\n";
  meta << "generator=" << describe(d.generator) << "\n";
  meta << "seed=" << d.seed << "\n";
  meta << "first_path=" << d.first_path << "\n";
  meta << "clip_floor=" << format_double(d.clip_floor) << "\n";
  if (d.perturbation) meta << "perturbation=" << perturbation_name(*d.perturbation) << "\n";
  if (d.trunc_epsilon) meta << "trunc_epsilon=" << format_double(*d.trunc_epsilon) << "\n";
  meta << "margin=" << d.margin << "\n";
  meta << "grid_n=" << grid.size() << "\n";
  meta << "n_paths=" << ensemble.n_paths() << "\n";
  meta << "truncation_bound=" << format_double(ensemble.truncation_bound()) << "\n";
}

PathEnsemble read_ensemble_csv(const std::filesystem::path& csv_path,
                               const std::filesystem::path& meta_path) {
  std::ifstream meta(meta_path);
  if (!meta) throw std::runtime_error("cannot open " + meta_path.string());
  EnsembleDescriptor desc;
  int grid_n = 0;
  std::size_t n_paths = 0;
  double trunc_bound = 0.0;
  std::string line;
  while (std::getline(meta, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("bad metadata line: " + line);
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "version") { /* informational */
    } else if (key == "kind") {
      desc.kind = kind_from_name(value);
    } else if (key == "generator") {
      desc.generator = parse_generator(value);
    } else if (key == "seed") {
      desc.seed = std::stoull(value);
    } else if (key == "first_path") {
      desc.first_path = std::stoull(value);
    } else if (key == "clip_floor") {
      desc.clip_floor = parse_double(value);
    } else if (key == "perturbation") {
      desc.perturbation = perturbation_from_name(value);
    } else if (key == "trunc_epsilon") {
      desc.trunc_epsilon = parse_double(value);
    } else if (key == "margin") {
      desc.margin = value;
    } else if (key == "grid_n") {
      grid_n = std::stoi(value);
    } else if (key == "n_paths") {
      n_paths = std::stoull(value);
    } else if (key == "truncation_bound") {
      trunc_bound = parse_double(value);
    } else {
      throw std::runtime_error("unknown metadata key: " + key);
    }
  }
  if (grid_n < 1 || n_paths == 0) throw std::runtime_error("metadata missing grid_n or n_paths");

  std::ifstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot open " + csv_path.string());
  if (!std::getline(csv, line)) throw std::runtime_error("ensemble csv: missing header");
  std::vector<double> values;
  values.reserve(n_paths * static_cast<std::size_t>(grid_n));
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != static_cast<std::size_t>(grid_n))
      throw std::runtime_error("ensemble csv: row width mismatch");
    for (const auto& c : cells) values.push_back(parse_double(c));
  }
  return PathEnsemble(Grid(grid_n), n_paths, std::move(values), desc, trunc_bound);
}

}  // namespace sojourn
