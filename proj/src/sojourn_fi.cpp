#include "sojourn/sojourn_fi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace sojourn {

namespace {

constexpr double kConstTol = 1e-12;

double constant_f_value(const GridFunction& f) {
  const auto v = f.values();
  for (double x : v)
    if (std::abs(x - v[0]) > kConstTol)
      throw std::invalid_argument("fragility_index_ratio: f must be constant");
  return v[0];
}

void check_same_grid(const PathEnsemble& ensemble, const ThresholdSpec& threshold) {
  if (!(ensemble.grid() == threshold.grid()))
    throw std::invalid_argument("ensemble and threshold live on different grids");
}

// delta-method s.e. of a/b from per-sample first/second moments
double ratio_std_error(double mean_a, double var_a, double mean_b, double var_b, double cov_ab,
                       std::int64_t n) {
  if (n < 2 || mean_b == 0.0) return 0.0;
  const double b2 = mean_b * mean_b;
  double v = var_a / b2 + mean_a * mean_a * var_b / (b2 * b2) -
             2.0 * mean_a * cov_ab / (b2 * mean_b);
  v = std::max(v, 0.0);
  return std::sqrt(v / static_cast<double>(n));
}

}  // namespace

ThresholdSpec::ThresholdSpec(GridFunction f, double level) : f_(std::move(f)), level_(level) {
  if (!(level > 0.0)) throw std::invalid_argument("ThresholdSpec: level must be > 0");
  for (double v : f_.values())
    if (v > 0.0) throw std::invalid_argument("ThresholdSpec: f must be <= 0");
  if (f_.sup_abs() > 1.0 + kConstTol)
    throw std::invalid_argument("ThresholdSpec: sup|f| must be <= 1");
}

double ThresholdSpec::exact_level_cap(const GeneratorSpec& spec) const {
  const double supf = f_.sup_abs();
  if (supf == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (analytic_constant(spec) * supf);
}

double sojourn_fraction(std::span<const double> path, std::span<const double> f, double level) {
  if (path.size() != f.size())
    throw std::invalid_argument("sojourn_fraction: path and f sizes differ");
  std::size_t hits = 0;
  for (std::size_t j = 0; j < path.size(); ++j) hits += (path[j] > level * f[j]);
  return static_cast<double>(hits) / static_cast<double>(path.size());
}

double sojourn_time(const GridFunction& path, const ThresholdSpec& threshold) {
  if (!(path.grid() == threshold.grid()))
    throw std::invalid_argument("sojourn_time: path and threshold grids differ");
  return sojourn_fraction(path.values(), threshold.f().values(), threshold.level());
}

std::vector<double> positive_sojourns(const PathEnsemble& ensemble, const ThresholdSpec& threshold,
                                      const ExecPolicy& exec) {
  check_same_grid(ensemble, threshold);
  const auto fv = threshold.f().values();
  const double s = threshold.level();

  struct Collect {
    std::vector<double> values;
    void merge(const Collect& o) { values.insert(values.end(), o.values.begin(), o.values.end()); }
  };
  auto got = parallel_reduce<Collect>(
      static_cast<std::int64_t>(ensemble.n_paths()), exec, [] { return Collect{}; },
      [&](std::int64_t begin, std::int64_t end, Collect& c) {
        for (std::int64_t i = begin; i < end; ++i) {
          const double v = sojourn_fraction(ensemble.path(static_cast<std::size_t>(i)), fv, s);
          if (v > 0.0) c.values.push_back(v);
        }
      });
  return std::move(got.values);
}

MCEstimate exceedance_probability(const PathEnsemble& ensemble, const ThresholdSpec& threshold,
                                  const ExecPolicy& exec) {
  check_same_grid(ensemble, threshold);
  const auto fv = threshold.f().values();
  const double s = threshold.level();

  struct Count {
    std::int64_t hits = 0;
    void merge(const Count& o) { hits += o.hits; }
  };
  auto got = parallel_reduce<Count>(
      static_cast<std::int64_t>(ensemble.n_paths()), exec, [] { return Count{}; },
      [&](std::int64_t begin, std::int64_t end, Count& c) {
        for (std::int64_t i = begin; i < end; ++i) {
          const auto path = ensemble.path(static_cast<std::size_t>(i));
          for (std::size_t j = 0; j < path.size(); ++j) {
            if (path[j] > s * fv[j]) {
              ++c.hits;
              break;
            }
          }
        }
      });
  return estimate_proportion(got.hits, static_cast<std::int64_t>(ensemble.n_paths()));
}

MCEstimate fragility_index_ratio(const PathEnsemble& ensemble, const ThresholdSpec& threshold,
                                 const MarginSpec& margin, const ExecPolicy& exec) {
  const double f0 = constant_f_value(threshold.f());
  const double one_minus_c = 1.0 - margin.cdf(threshold.level() * f0);
  const MCEstimate p = exceedance_probability(ensemble, threshold, exec);
  if (p.mean == 0.0)
    throw floor_error("fragility_index_ratio: no path exceeds the threshold");
  const double ratio = one_minus_c / p.mean;
  return {ratio, one_minus_c * p.std_error / (p.mean * p.mean), p.n_samples};
}

MCEstimate mean_conditional_sojourn(const PathEnsemble& ensemble, const ThresholdSpec& threshold,
                                    int min_exceedances, const ExecPolicy& exec) {
  const auto sojourns = positive_sojourns(ensemble, threshold, exec);
  if (std::cmp_less(sojourns.size(), min_exceedances))
    throw floor_error("mean_conditional_sojourn: " + std::to_string(sojourns.size()) +
                      " exceeding paths < floor " + std::to_string(min_exceedances));
  return estimate_mean(sojourns);
}

std::vector<double> default_y_mesh(int points) {
  if (points < 2) throw std::invalid_argument("default_y_mesh: need >= 2 points");
  std::vector<double> mesh(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    mesh[static_cast<std::size_t>(i)] = static_cast<double>(i) / static_cast<double>(points - 1);
  return mesh;
}

SurvivorCurve theoretical_sojourn_survivor(const GeneratorSpec& spec, const GridFunction& f,
                                           std::span<const double> y_mesh, std::int64_t n_samples,
                                           RandomStream stream, const ExecPolicy& exec) {
  if (n_samples < 2) throw std::invalid_argument("theoretical_sojourn_survivor: need samples");
  for (double v : f.values())
    if (v > 0.0) throw std::invalid_argument("theoretical_sojourn_survivor: f must be <= 0");
  for (double y : y_mesh)
    if (!(y >= 0.0 && y <= 1.0))
      throw std::invalid_argument("theoretical_sojourn_survivor: y outside [0,1]");

  const Grid& grid = f.grid();
  const GeneratorSampler sampler(spec, grid);
  const auto fv = f.values();
  const auto n = static_cast<std::size_t>(grid.size());
  const auto ny = y_mesh.size();

  // per-sample: a_y = level_for_occupation of |f|Z at y, b = the same at 0;
  // the survivor is E(a_y)/E(b), errors by the delta method with covariance
  struct CurveAcc {
    std::int64_t count = 0;
    std::vector<double> sa, saa, sab;
    double sb = 0.0, sbb = 0.0;
    void merge(const CurveAcc& o) {
      count += o.count;
      sb += o.sb;
      sbb += o.sbb;
      for (std::size_t k = 0; k < sa.size(); ++k) {
        sa[k] += o.sa[k];
        saa[k] += o.saa[k];
        sab[k] += o.sab[k];
      }
    }
  };
  auto make = [&] {
    CurveAcc acc;
    acc.sa.assign(ny, 0.0);
    acc.saa.assign(ny, 0.0);
    acc.sab.assign(ny, 0.0);
    return acc;
  };
  auto acc = parallel_reduce<CurveAcc>(
      n_samples, exec, make, [&](std::int64_t begin, std::int64_t end, CurveAcc& a) {
        std::vector<double> z(n);
        std::vector<double> g(n);
        std::vector<double> sorted;
        for (std::int64_t i = begin; i < end; ++i) {
          RandomStream rs = stream.substream(static_cast<std::uint64_t>(i));
          sampler.sample(rs, z);
          for (std::size_t j = 0; j < n; ++j) g[j] = std::abs(fv[j]) * z[j];
          sort_descending(g, sorted);
          const double b = sorted[0];
          ++a.count;
          a.sb += b;
          a.sbb += b * b;
          for (std::size_t k = 0; k < ny; ++k) {
            const double v = level_from_sorted(sorted, y_mesh[k]);
            a.sa[k] += v;
            a.saa[k] += v * v;
            a.sab[k] += v * b;
          }
        }
      });

  const auto nn = static_cast<double>(acc.count);
  const double mean_b = acc.sb / nn;
  if (!(mean_b > 0.0))
    throw floor_error("theoretical_sojourn_survivor: degenerate denominator E(max|f|Z) = 0");
  const double var_b = std::max(0.0, (acc.sbb - nn * mean_b * mean_b) / (nn - 1.0));

  SurvivorCurve curve;
  curve.mesh.assign(y_mesh.begin(), y_mesh.end());
  curve.survivor.resize(ny);
  curve.std_error.resize(ny);
  for (std::size_t k = 0; k < ny; ++k) {
    const double mean_a = acc.sa[k] / nn;
    const double var_a = std::max(0.0, (acc.saa[k] - nn * mean_a * mean_a) / (nn - 1.0));
    const double cov = (acc.sab[k] - nn * mean_a * mean_b) / (nn - 1.0);
    curve.survivor[k] = mean_a / mean_b;
    curve.std_error[k] = ratio_std_error(mean_a, var_a, mean_b, var_b, cov, acc.count);
  }
  return curve;
}

SurvivorCurve survivor_from_sojourns(std::span<const double> sojourns,
                                     std::span<const double> y_mesh) {
  if (sojourns.empty()) throw floor_error("survivor_from_sojourns: no positive sojourns");
  std::vector<double> sorted(sojourns.begin(), sojourns.end());
  std::sort(sorted.begin(), sorted.end());
  const auto nn = static_cast<double>(sorted.size());

  SurvivorCurve curve;
  curve.mesh.assign(y_mesh.begin(), y_mesh.end());
  curve.survivor.reserve(y_mesh.size());
  curve.std_error.reserve(y_mesh.size());
  for (double y : y_mesh) {
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), y);
    const double p = static_cast<double>(above) / nn;
    curve.survivor.push_back(p);
    curve.std_error.push_back(std::sqrt(p * (1.0 - p) / nn));
  }
  return curve;
}

SurvivorCurve empirical_sojourn_survivor(const PathEnsemble& ensemble,
                                         const ThresholdSpec& threshold,
                                         std::span<const double> y_mesh, int min_exceedances,
                                         const ExecPolicy& exec) {
  const auto sojourns = positive_sojourns(ensemble, threshold, exec);
  if (std::cmp_less(sojourns.size(), min_exceedances))
    throw floor_error("empirical_sojourn_survivor: " + std::to_string(sojourns.size()) +
                      " exceeding paths < floor " + std::to_string(min_exceedances));
  return survivor_from_sojourns(sojourns, y_mesh);
}

SojournSummary summarize_sojourns(const PathEnsemble& ensemble, const ThresholdSpec& threshold,
                                  std::span<const double> y_mesh, int min_exceedances,
                                  const ExecPolicy& exec) {
  const auto sojourns = positive_sojourns(ensemble, threshold, exec);
  if (std::cmp_less(sojourns.size(), min_exceedances))
    throw floor_error("summarize_sojourns: " + std::to_string(sojourns.size()) +
                      " exceeding paths < floor " + std::to_string(min_exceedances));
  SojournSummary out;
  out.p_positive = estimate_proportion(static_cast<std::int64_t>(sojourns.size()),
                                       static_cast<std::int64_t>(ensemble.n_paths()));
  out.mean_conditional = estimate_mean(sojourns);
  out.survivor = survivor_from_sojourns(sojourns, y_mesh);
  return out;
}

}  // namespace sojourn
