#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sojourn/generators.hpp"
#include "sojourn/grid.hpp"
#include "sojourn/margins.hpp"
#include "sojourn/mc.hpp"
#include "sojourn/rng.hpp"

namespace sojourn {

enum class ProcessKind { Gpp, Msp, SimpleMsp, PerturbedGpp };

enum class PerturbationDf { Uniform01, StdExponential };

// margin labels: "standard-gpp", "standard-msp", "frechet", "perturbed-gpp",
// or a MarginSpec name after transform_margins
struct EnsembleDescriptor {
  ProcessKind kind = ProcessKind::Gpp;
  GeneratorSpec generator;
  std::uint64_t seed = 0;
  std::uint64_t first_path = 0;
  double clip_floor = 0.0;
  std::optional<PerturbationDf> perturbation;
  std::optional<double> trunc_epsilon;
  std::string margin = "standard-gpp";
};

// Paths stored row-major over a shared grid.
class PathEnsemble {
 public:
  PathEnsemble(Grid grid, std::size_t n_paths, std::vector<double> values,
               EnsembleDescriptor descriptor, double truncation_bound = 0.0);

  const Grid& grid() const { return grid_; }
  std::size_t n_paths() const { return n_paths_; }
  std::span<const double> path(std::size_t i) const;
  std::span<const double> values() const { return values_; }
  const EnsembleDescriptor& descriptor() const { return descriptor_; }
  // bound on the probability that truncation altered any grid value of any
  // path; 0 for exactly simulated ensembles
  double truncation_bound() const { return truncation_bound_; }

 private:
  Grid grid_;
  std::size_t n_paths_;
  std::vector<double> values_;
  EnsembleDescriptor descriptor_;
  double truncation_bound_;
};

double default_clip_floor(const GeneratorSpec& spec);  // -1e6 / analytic constant

// V_t = max(-U/Z_t, clip_floor), U ~ Uniform(0,1) independent of Z.
// Path i uses substream(first_path + i), so chunked generation with matching
// offsets reproduces one large ensemble bitwise.
PathEnsemble sample_gpp(const GeneratorSpec& spec, const Grid& grid, std::size_t n_paths,
                        RandomStream stream, double clip_floor, const ExecPolicy& exec = {},
                        std::uint64_t first_path = 0);

// V_t = max(-W/Z_t, clip_floor) with W ~ perturbation df
PathEnsemble sample_perturbed_gpp(const GeneratorSpec& spec, PerturbationDf perturbation,
                                  const Grid& grid, std::size_t n_paths, RandomStream stream,
                                  double clip_floor, const ExecPolicy& exec = {},
                                  std::uint64_t first_path = 0);

// eta_t = -1 / max_i Z^(i)_t / Gamma_i over a Poisson series; bounded
// generators stop exactly, unbounded ones stop when the union bound on any
// further change drops below trunc_epsilon (required for unbounded specs).
PathEnsemble sample_msp(const GeneratorSpec& spec, const Grid& grid, std::size_t n_paths,
                        RandomStream stream, std::optional<double> trunc_epsilon = {},
                        const ExecPolicy& exec = {}, std::uint64_t first_path = 0);

// the same series without the -1/x flip: unit-Frechet margins
PathEnsemble sample_simple_msp(const GeneratorSpec& spec, const Grid& grid, std::size_t n_paths,
                               RandomStream stream, std::optional<double> trunc_epsilon = {},
                               const ExecPolicy& exec = {}, std::uint64_t first_path = 0);

// rebuild an ensemble from its provenance record (untransformed kinds only)
PathEnsemble regenerate_ensemble(const EnsembleDescriptor& desc, const Grid& grid,
                                 std::size_t n_paths, const ExecPolicy& exec = {});

// marginal cdf of the ensemble on its own scale, where known in closed form
double ensemble_cdf(const EnsembleDescriptor& desc, double x);
bool has_exact_margins(const EnsembleDescriptor& desc);

// pointwise quantile(target) o cdf(source); requires exact source margins
PathEnsemble transform_margins(const PathEnsemble& ensemble, const MarginSpec& target);

// CSV body: one row per path, header t_1..t_n; sidecar: key=value metadata.
// Doubles round-trip bitwise.
void write_ensemble_csv(const PathEnsemble& ensemble, const std::filesystem::path& csv_path,
                        const std::filesystem::path& meta_path);
PathEnsemble read_ensemble_csv(const std::filesystem::path& csv_path,
                               const std::filesystem::path& meta_path);

}  // namespace sojourn
