#include "sojourn/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace sojourn {

namespace {

MCEstimate mean_of_path_statistic(const GeneratorSpec& spec, const Grid& grid,
                                  std::int64_t n_samples, RandomStream& stream,
                                  const ExecPolicy& exec,
                                  const std::function<double(std::span<const double>)>& stat) {
  if (n_samples < 1) throw std::invalid_argument("functional estimate: need samples");
  const GeneratorSampler sampler(spec, grid);
  auto acc = parallel_reduce<MeanVarAccumulator>(
      n_samples, exec, [] { return MeanVarAccumulator{}; },
      [&](std::int64_t begin, std::int64_t end, MeanVarAccumulator& a) {
        std::vector<double> z(static_cast<std::size_t>(grid.size()));
        for (std::int64_t i = begin; i < end; ++i) {
          RandomStream rs = stream.substream(static_cast<std::uint64_t>(i));
          sampler.sample(rs, z);
          a.add(stat(z));
        }
      });
  return acc.estimate();
}

}  // namespace

MCEstimate dnorm_estimate(const GeneratorSpec& spec, const GridFunction& f, std::int64_t n_samples,
                          RandomStream stream, const ExecPolicy& exec) {
  const auto fv = f.values();
  return mean_of_path_statistic(spec, f.grid(), n_samples, stream, exec,
                                [&](std::span<const double> z) {
                                  double m = 0.0;
                                  for (std::size_t j = 0; j < z.size(); ++j)
                                    m = std::max(m, std::abs(fv[j]) * z[j]);
                                  return m;
                                });
}

MCEstimate min_over_indices_estimate(const GeneratorSpec& spec, const GridFunction& f,
                                     std::span<const int> indices, std::int64_t n_samples,
                                     RandomStream stream, const ExecPolicy& exec) {
  if (indices.empty()) throw std::invalid_argument("min_over_indices_estimate: no indices");
  for (int j : indices)
    if (j < 0 || j >= f.grid().size())
      throw std::invalid_argument("min_over_indices_estimate: index out of range");
  const auto fv = f.values();
  std::vector<int> idx(indices.begin(), indices.end());
  return mean_of_path_statistic(spec, f.grid(), n_samples, stream, exec,
                                [&, idx](std::span<const double> z) {
                                  double m = std::numeric_limits<double>::infinity();
                                  for (int j : idx) {
                                    const auto u = static_cast<std::size_t>(j);
                                    m = std::min(m, std::abs(fv[u]) * z[u]);
                                  }
                                  return m;
                                });
}

MCEstimate min_functional_estimate(const GeneratorSpec& spec, const GridFunction& f, double a,
                                   double b, std::int64_t n_samples, RandomStream stream,
                                   const ExecPolicy& exec) {
  if (!(a >= 0.0 && a <= b && b <= 1.0))
    throw std::invalid_argument("min_functional_estimate: need 0 <= a <= b <= 1");
  const Grid& grid = f.grid();
  std::vector<int> idx;
  for (int j = 0; j < grid.size(); ++j) {
    const double t = grid.point(j);
    if (t >= a - 1e-12 && t <= b + 1e-12) idx.push_back(j);
  }
  if (idx.empty()) idx.push_back(grid.nearest_index(0.5 * (a + b)));
  return min_over_indices_estimate(spec, f, idx, n_samples, stream, exec);
}

MCEstimate fidis_evd_value(const GeneratorSpec& spec, const Grid& grid,
                           std::span<const double> times, std::span<const double> x,
                           std::int64_t n_samples, RandomStream stream, const ExecPolicy& exec) {
  if (times.empty() || times.size() != x.size())
    throw std::invalid_argument("fidis_evd_value: times and x must match and be nonempty");
  std::vector<int> idx;
  std::vector<double> absx;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (x[i] > 0.0) throw std::invalid_argument("fidis_evd_value: x must be <= 0");
    idx.push_back(grid.index_of(times[i]));
    absx.push_back(-x[i]);
  }
  auto e = mean_of_path_statistic(spec, grid, n_samples, stream, exec,
                                  [&](std::span<const double> z) {
                                    double m = 0.0;
                                    for (std::size_t i = 0; i < idx.size(); ++i)
                                      m = std::max(m, absx[i] * z[static_cast<std::size_t>(idx[i])]);
                                    return m;
                                  });
  const double g = std::exp(-e.mean);
  return {g, g * e.std_error, e.n_samples};
}

}  // namespace sojourn
