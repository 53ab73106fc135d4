#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sojourn/errors.hpp"
#include "sojourn/generators.hpp"
#include "sojourn/grid.hpp"
#include "sojourn/margins.hpp"
#include "sojourn/mc.hpp"
#include "sojourn/processes.hpp"
#include "sojourn/rng.hpp"

namespace sojourn {

inline constexpr int kDefaultFloor = 100;

// Threshold surface s*f: f <= 0 with sup|f| <= 1, level s > 0.
class ThresholdSpec {
 public:
  ThresholdSpec(GridFunction f, double level);

  const GridFunction& f() const { return f_; }
  double level() const { return level_; }
  const Grid& grid() const { return f_.grid(); }

  // largest level with exact tail identities: 1 / (m * sup|f|)
  double exact_level_cap(const GeneratorSpec& spec) const;

 private:
  GridFunction f_;
  double level_;
};

// (1/n) #{i : path(t_i) > s f(t_i)}
double sojourn_fraction(std::span<const double> path, std::span<const double> f, double level);
double sojourn_time(const GridFunction& path, const ThresholdSpec& threshold);

// sojourn times of the paths that exceed somewhere (order = path order)
std::vector<double> positive_sojourns(const PathEnsemble& ensemble, const ThresholdSpec& threshold,
                                      const ExecPolicy& exec = {});

MCEstimate exceedance_probability(const PathEnsemble& ensemble, const ThresholdSpec& threshold,
                                  const ExecPolicy& exec = {});

// n (1 - c) / (1 - P(sojourn = 0)) with c the margin cdf at the (constant)
// threshold value; f must be constant.  Throws floor_error at 0 exceedances.
MCEstimate fragility_index_ratio(const PathEnsemble& ensemble, const ThresholdSpec& threshold,
                                 const MarginSpec& margin, const ExecPolicy& exec = {});

// mean sojourn given a positive sojourn; floor_error below min_exceedances
MCEstimate mean_conditional_sojourn(const PathEnsemble& ensemble, const ThresholdSpec& threshold,
                                    int min_exceedances = kDefaultFloor,
                                    const ExecPolicy& exec = {});

struct SurvivorCurve {
  std::vector<double> mesh;
  std::vector<double> survivor;
  std::vector<double> std_error;
};

std::vector<double> default_y_mesh(int points = 101);

// P(S > y | S > 0) in the high-threshold limit, from generator samples alone:
// ratio of E(level_for_occupation of |f|Z at y) to the same at 0.
SurvivorCurve theoretical_sojourn_survivor(const GeneratorSpec& spec, const GridFunction& f,
                                           std::span<const double> y_mesh, std::int64_t n_samples,
                                           RandomStream stream, const ExecPolicy& exec = {});

SurvivorCurve empirical_sojourn_survivor(const PathEnsemble& ensemble,
                                         const ThresholdSpec& threshold,
                                         std::span<const double> y_mesh,
                                         int min_exceedances = kDefaultFloor,
                                         const ExecPolicy& exec = {});

// survivor of a pooled positive-sojourn sample (chunked ensembles)
SurvivorCurve survivor_from_sojourns(std::span<const double> sojourns,
                                     std::span<const double> y_mesh);

struct SojournSummary {
  MCEstimate p_positive;
  MCEstimate mean_conditional;
  SurvivorCurve survivor;
};

SojournSummary summarize_sojourns(const PathEnsemble& ensemble, const ThresholdSpec& threshold,
                                  std::span<const double> y_mesh,
                                  int min_exceedances = kDefaultFloor,
                                  const ExecPolicy& exec = {});

}  // namespace sojourn
