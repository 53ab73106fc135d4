#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sojourn/generators.hpp"
#include "sojourn/grid.hpp"
#include "sojourn/mc.hpp"
#include "sojourn/processes.hpp"
#include "sojourn/sojourn_fi.hpp"

namespace sojourn {

// Law of the remaining time above the threshold surface after t0 (t0 snapped
// to the grid).  survivor[k] = P(tau > u_mesh[k] | exceedance at t0); the
// excursion can run to the endpoint, which carries the mass at 1 - t0.
struct ExcursionLaw {
  double t0 = 0.0;
  std::vector<double> u_mesh;
  std::vector<double> survivor;
  std::vector<double> std_error;
  double mass_at_end = 0.0;
  double mass_at_end_se = 0.0;
  MCEstimate expectation;
};

// time from t0 until the path first drops to the threshold or the interval
// ends: (k - j0)/n for the first failing index, 1 - t0 if none fails (the
// endpoint t = 1 itself is outside the window).  nullopt when the path does
// not exceed at t0.
std::optional<double> remaining_excursion_time(std::span<const double> path,
                                               const ThresholdSpec& threshold, double t0);

// {k/n : k = 0 .. n-2-j0}, the u values where the grid law can move
std::vector<double> default_u_mesh(const Grid& grid, double t0);

// limit law from generator samples: survivor(u) = E(min over [t0, t0+u] of
// |f| Z) / |f(t0)|, window endpoints on the grid
ExcursionLaw excursion_survivor_theoretical(const GeneratorSpec& spec, const GridFunction& f,
                                            double t0, std::span<const double> u_mesh,
                                            std::int64_t n_samples, RandomStream stream,
                                            const ExecPolicy& exec = {});

ExcursionLaw excursion_survivor_empirical(const PathEnsemble& ensemble,
                                          const ThresholdSpec& threshold, double t0,
                                          std::span<const double> u_mesh,
                                          int min_exceedances = kDefaultFloor,
                                          const ExecPolicy& exec = {});

// pool of excursion times from chunked ensembles -> same law
ExcursionLaw excursion_law_from_times(std::span<const double> times, double t0,
                                      std::span<const double> u_mesh, const Grid& grid);

}  // namespace sojourn
