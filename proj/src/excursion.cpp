#include "sojourn/excursion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "sojourn/errors.hpp"

namespace sojourn {

namespace {

// snapped inspection index; the window [t0, t0+u] covers indices j0..j0+floor(un)
int inspection_index(const Grid& grid, double t0) {
  if (!(t0 >= 0.0 && t0 < 1.0))
    throw std::invalid_argument("excursion: t0 must lie in [0,1)");
  return grid.nearest_index(t0);
}

}  // namespace

std::optional<double> remaining_excursion_time(std::span<const double> path,
                                               const ThresholdSpec& threshold, double t0) {
  const Grid& grid = threshold.grid();
  if (path.size() != static_cast<std::size_t>(grid.size()))
    throw std::invalid_argument("remaining_excursion_time: path size mismatch");
  const int j0 = inspection_index(grid, t0);
  const auto fv = threshold.f().values();
  const double s = threshold.level();
  const int n = grid.size();

  if (!(path[static_cast<std::size_t>(j0)] > s * fv[static_cast<std::size_t>(j0)]))
    return std::nullopt;
  // first failure among the grid points of [t0, 1); t = 1 lies outside
  for (int k = j0 + 1; k <= n - 2; ++k) {
    if (!(path[static_cast<std::size_t>(k)] > s * fv[static_cast<std::size_t>(k)]))
      return static_cast<double>(k - j0) / static_cast<double>(n);
  }
  return static_cast<double>(n - 1 - j0) / static_cast<double>(n);  // 1 - t0
}

std::vector<double> default_u_mesh(const Grid& grid, double t0) {
  const int j0 = inspection_index(grid, t0);
  const int count = grid.size() - 1 - j0;  // u = k/n, k < n(1-t0)
  std::vector<double> mesh;
  mesh.reserve(static_cast<std::size_t>(std::max(count, 1)));
  for (int k = 0; k < std::max(count, 1); ++k)
    mesh.push_back(static_cast<double>(k) / static_cast<double>(grid.size()));
  return mesh;
}

ExcursionLaw excursion_survivor_theoretical(const GeneratorSpec& spec, const GridFunction& f,
                                            double t0, std::span<const double> u_mesh,
                                            std::int64_t n_samples, RandomStream stream,
                                            const ExecPolicy& exec) {
  if (n_samples < 2) throw std::invalid_argument("excursion_survivor_theoretical: need samples");
  const Grid& grid = f.grid();
  const int n = grid.size();
  const int j0 = inspection_index(grid, t0);
  const double f0 = std::abs(f[j0]);
  if (!(f0 > 0.0)) throw std::invalid_argument("excursion_survivor_theoretical: f(t0) = 0");
  for (double v : f.values())
    if (v > 0.0) throw std::invalid_argument("excursion_survivor_theoretical: f must be <= 0");

  // window end index per mesh value (clamped into the grid)
  std::vector<int> ends;
  ends.reserve(u_mesh.size());
  for (double u : u_mesh) {
    if (!(u >= 0.0 && u < 1.0 - grid.point(j0) + 1e-12))
      throw std::invalid_argument("excursion_survivor_theoretical: u outside [0, 1-t0)");
    ends.push_back(std::min(j0 + static_cast<int>(u * n + 1e-9), n - 1));
  }

  const GeneratorSampler sampler(spec, grid);
  const auto fv = f.values();
  const int integration_end = n - 2;  // running-min windows feeding E(tau)

  struct Acc {
    MeanVarAccumulator integral;  // (1/n) sum of running minima over [t0, 1)
    MeanVarAccumulator endmass;   // running min over [t0, 1]
    std::vector<MeanVarAccumulator> at_mesh;
    void merge(const Acc& o) {
      integral.merge(o.integral);
      endmass.merge(o.endmass);
      for (std::size_t k = 0; k < at_mesh.size(); ++k) at_mesh[k].merge(o.at_mesh[k]);
    }
  };
  auto make = [&] {
    Acc a;
    a.at_mesh.resize(u_mesh.size());
    return a;
  };
  auto acc = parallel_reduce<Acc>(
      n_samples, exec, make, [&](std::int64_t begin, std::int64_t end, Acc& a) {
        std::vector<double> z(static_cast<std::size_t>(n));
        std::vector<double> runmin(static_cast<std::size_t>(n));
        for (std::int64_t i = begin; i < end; ++i) {
          RandomStream rs = stream.substream(static_cast<std::uint64_t>(i));
          sampler.sample(rs, z);
          double m = std::numeric_limits<double>::infinity();
          double integral = 0.0;
          for (int j = j0; j < n; ++j) {
            const auto u = static_cast<std::size_t>(j);
            m = std::min(m, std::abs(fv[u]) * z[u]);
            runmin[u] = m;
            if (j <= integration_end) integral += m;
          }
          a.integral.add(integral / static_cast<double>(n));
          a.endmass.add(runmin[static_cast<std::size_t>(n - 1)]);
          for (std::size_t k = 0; k < a.at_mesh.size(); ++k)
            a.at_mesh[k].add(runmin[static_cast<std::size_t>(ends[k])]);
        }
      });

  ExcursionLaw law;
  law.t0 = grid.point(j0);
  law.u_mesh.assign(u_mesh.begin(), u_mesh.end());
  for (auto& m : acc.at_mesh) {
    const auto e = m.estimate();
    law.survivor.push_back(e.mean / f0);
    law.std_error.push_back(e.std_error / f0);
  }
  const auto em = acc.endmass.estimate();
  law.mass_at_end = em.mean / f0;
  law.mass_at_end_se = em.std_error / f0;
  const auto integral = acc.integral.estimate();
  law.expectation = {integral.mean / f0, integral.std_error / f0, integral.n_samples};
  return law;
}

ExcursionLaw excursion_law_from_times(std::span<const double> times, double t0,
                                      std::span<const double> u_mesh, const Grid& grid) {
  if (times.empty()) throw floor_error("excursion_law_from_times: no conditioning paths");
  const int j0 = inspection_index(grid, t0);
  const double full = static_cast<double>(grid.size() - 1 - j0) / static_cast<double>(grid.size());
  std::vector<double> sorted(times.begin(), times.end());
  std::sort(sorted.begin(), sorted.end());
  const auto nn = static_cast<double>(sorted.size());

  ExcursionLaw law;
  law.t0 = grid.point(j0);
  law.u_mesh.assign(u_mesh.begin(), u_mesh.end());
  for (double u : u_mesh) {
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), u);
    const double p = static_cast<double>(above) / nn;
    law.survivor.push_back(p);
    law.std_error.push_back(std::sqrt(p * (1.0 - p) / nn));
  }
  const double half_step = 0.5 / static_cast<double>(grid.size());
  const auto at_end =
      sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), full - half_step);
  law.mass_at_end = static_cast<double>(at_end) / nn;
  law.mass_at_end_se = std::sqrt(law.mass_at_end * (1.0 - law.mass_at_end) / nn);
  law.expectation = estimate_mean(sorted);
  return law;
}

ExcursionLaw excursion_survivor_empirical(const PathEnsemble& ensemble,
                                          const ThresholdSpec& threshold, double t0,
                                          std::span<const double> u_mesh, int min_exceedances,
                                          const ExecPolicy& exec) {
  if (!(ensemble.grid() == threshold.grid()))
    throw std::invalid_argument("excursion_survivor_empirical: grid mismatch");
  struct Collect {
    std::vector<double> values;
    void merge(const Collect& o) { values.insert(values.end(), o.values.begin(), o.values.end()); }
  };
  auto got = parallel_reduce<Collect>(
      static_cast<std::int64_t>(ensemble.n_paths()), exec, [] { return Collect{}; },
      [&](std::int64_t begin, std::int64_t end, Collect& c) {
        for (std::int64_t i = begin; i < end; ++i) {
          const auto tau =
              remaining_excursion_time(ensemble.path(static_cast<std::size_t>(i)), threshold, t0);
          if (tau) c.values.push_back(*tau);
        }
      });
  if (std::cmp_less(got.values.size(), min_exceedances))
    throw floor_error("excursion_survivor_empirical: " + std::to_string(got.values.size()) +
                      " conditioning paths < floor " + std::to_string(min_exceedances));
  return excursion_law_from_times(got.values, t0, u_mesh, ensemble.grid());
}

}  // namespace sojourn
