#include "sojourn/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "sojourn/csv.hpp"

namespace sojourn {

namespace {

// subset maxima over w, filled for every nonempty mask; the empty-subset
// sentinel is -inf so negative values survive the recursion
void fill_subset_maxima(std::span<const double> w, std::vector<double>& subset_max) {
  const std::size_t n_masks = std::size_t{1} << w.size();
  subset_max[0] = -std::numeric_limits<double>::infinity();
  for (std::size_t mask = 1; mask < n_masks; ++mask) {
    const auto low = static_cast<std::size_t>(std::countr_zero(mask));
    subset_max[mask] = std::max(subset_max[mask & (mask - 1)], w[low]);
  }
}

}  // namespace

bool maxmin_identity_check(std::span<const double> a, double rel_tol) {
  if (a.empty() || a.size() > kMaxInclusionExclusionPoints)
    throw std::invalid_argument("maxmin_identity_check: need 1..12 values");
  std::vector<double> subset_max(std::size_t{1} << a.size());
  fill_subset_maxima(a, subset_max);
  long double sum = 0.0L;
  for (std::size_t mask = 1; mask < subset_max.size(); ++mask) {
    const int sign = (std::popcount(mask) % 2 == 1) ? 1 : -1;
    sum += sign * static_cast<long double>(subset_max[mask]);
  }
  double scale = 1.0;
  for (double x : a) scale = std::max(scale, std::abs(x));
  const double lhs = static_cast<double>(sum);
  const double rhs = *std::min_element(a.begin(), a.end());
  return std::abs(lhs - rhs) <= rel_tol * scale;
}

MCEstimate survivor_via_inclusion_exclusion(const GeneratorSpec& spec, const GridFunction& f,
                                            std::span<const int> indices, double level,
                                            std::int64_t n_samples, RandomStream stream,
                                            const ExecPolicy& exec) {
  const auto k = indices.size();
  if (k == 0 || k > kMaxInclusionExclusionPoints)
    throw std::invalid_argument("survivor_via_inclusion_exclusion: need 1..12 points");
  if (!(level > 0.0)) throw std::invalid_argument("survivor_via_inclusion_exclusion: level <= 0");
  if (n_samples < 2) throw std::invalid_argument("survivor_via_inclusion_exclusion: need samples");
  const Grid& grid = f.grid();
  for (int j : indices)
    if (j < 0 || j >= grid.size())
      throw std::invalid_argument("survivor_via_inclusion_exclusion: index out of range");

  const GeneratorSampler sampler(spec, grid);
  const auto fv = f.values();
  const std::size_t n_masks = std::size_t{1} << k;
  const auto n = static_cast<std::size_t>(grid.size());

  auto point_weights = [&](std::span<const double> z, std::vector<double>& w) {
    for (std::size_t i = 0; i < k; ++i) {
      const auto j = static_cast<std::size_t>(indices[i]);
      w[i] = std::abs(fv[j]) * z[j];
    }
  };

  // pass 1: subset-mean estimates E_T of max_{i in T} |f(t_i)| Z_{t_i}
  struct SumAcc {
    std::int64_t count = 0;
    std::vector<double> sums;
    void merge(const SumAcc& o) {
      count += o.count;
      for (std::size_t i = 0; i < sums.size(); ++i) sums[i] += o.sums[i];
    }
  };
  auto sums = parallel_reduce<SumAcc>(
      n_samples, exec,
      [&] {
        SumAcc a;
        a.sums.assign(n_masks, 0.0);
        return a;
      },
      [&](std::int64_t begin, std::int64_t end, SumAcc& a) {
        std::vector<double> z(n), w(k), subset_max(n_masks);
        for (std::int64_t i = begin; i < end; ++i) {
          RandomStream rs = stream.substream(static_cast<std::uint64_t>(i));
          sampler.sample(rs, z);
          point_weights(z, w);
          fill_subset_maxima(w, subset_max);
          ++a.count;
          for (std::size_t mask = 1; mask < n_masks; ++mask) a.sums[mask] += subset_max[mask];
        }
      });

  const auto nn = static_cast<double>(sums.count);
  std::vector<double> gradient(n_masks, 0.0);  // d(value)/d(E_T) signed weights
  double value = 1.0;
  for (std::size_t mask = 1; mask < n_masks; ++mask) {
    const double e_t = sums.sums[mask] / nn;
    const double sign = (std::popcount(mask) % 2 == 1) ? 1.0 : -1.0;
    value -= sign * std::exp(-level * e_t);
    gradient[mask] = sign * level * std::exp(-level * e_t);
  }

  // pass 2 (same substreams): sample variance of the influence values
  auto infl = parallel_reduce<MeanVarAccumulator>(
      n_samples, exec, [] { return MeanVarAccumulator{}; },
      [&](std::int64_t begin, std::int64_t end, MeanVarAccumulator& a) {
        std::vector<double> z(n), w(k), subset_max(n_masks);
        for (std::int64_t i = begin; i < end; ++i) {
          RandomStream rs = stream.substream(static_cast<std::uint64_t>(i));
          sampler.sample(rs, z);
          point_weights(z, w);
          fill_subset_maxima(w, subset_max);
          double psi = 0.0;
          for (std::size_t mask = 1; mask < n_masks; ++mask)
            psi += gradient[mask] * subset_max[mask];
          a.add(psi);
        }
      });

  return {value, std::sqrt(infl.variance() / nn), sums.count};
}

CopulaCheckReport copula_expansion_check(const PathEnsemble& ensemble,
                                         std::span<const double> times,
                                         std::span<const double> weights,
                                         std::span<const double> eps_values,
                                         std::int64_t n_expansion_samples, RandomStream stream,
                                         const ExecPolicy& exec) {
  if (times.empty() || times.size() != weights.size())
    throw std::invalid_argument("copula_expansion_check: times/weights mismatch");
  if (eps_values.empty()) throw std::invalid_argument("copula_expansion_check: no eps values");
  const auto& desc = ensemble.descriptor();
  if (!has_exact_margins(desc))
    throw std::invalid_argument("copula_expansion_check: ensemble margins unknown");
  const Grid& grid = ensemble.grid();

  std::vector<int> idx;
  std::vector<double> fw(static_cast<std::size_t>(grid.size()), 0.0);
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(weights[i] > 0.0))
      throw std::invalid_argument("copula_expansion_check: weights must be > 0");
    const int j = grid.index_of(times[i]);
    idx.push_back(j);
    fw[static_cast<std::size_t>(j)] = weights[i];
  }
  for (double eps : eps_values)
    for (std::size_t i = 0; i < times.size(); ++i)
      if (!(eps * weights[i] >= 0.0 && eps * weights[i] < 1.0))
        throw std::invalid_argument("copula_expansion_check: y = 1 - eps*w outside (0,1]");

  // one shared estimate of E(max w_i Z_{t_i}); the expansion scales it by eps
  const auto dn = dnorm_estimate(desc.generator, GridFunction(grid, fw), n_expansion_samples,
                                 stream, exec);

  CopulaCheckReport report;
  double ratio_at_min = 0.0, ratio_at_max = 0.0, noise_at_min = 0.0, noise_at_max = 0.0;
  double eps_min = eps_values[0], eps_max = eps_values[0];
  bool rows_pass = true;
  for (double eps : eps_values) {
    std::int64_t hits = 0;
    for (std::size_t p = 0; p < ensemble.n_paths(); ++p) {
      const auto path = ensemble.path(p);
      bool all_leq = true;
      for (std::size_t i = 0; i < idx.size(); ++i) {
        const double u = ensemble_cdf(desc, path[static_cast<std::size_t>(idx[i])]);
        if (u > 1.0 - eps * weights[i]) {
          all_leq = false;
          break;
        }
      }
      hits += all_leq;
    }
    const auto emp = estimate_proportion(hits, static_cast<std::int64_t>(ensemble.n_paths()));
    CopulaCheckRow row;
    row.eps = eps;
    row.empirical = emp.mean;
    row.empirical_se = emp.std_error;
    row.expansion = 1.0 - eps * dn.mean;
    row.expansion_se = eps * dn.std_error;
    const double err = std::abs(row.empirical - row.expansion);
    const double noise = row.empirical_se + row.expansion_se;
    row.error_over_eps = eps > 0.0 ? err / eps : 0.0;
    row.noise_over_eps = eps > 0.0 ? noise / eps : 0.0;
    rows_pass = rows_pass && err <= 4.0 * noise + 10.0 * eps * eps;
    if (eps <= eps_min) {
      eps_min = eps;
      ratio_at_min = row.error_over_eps;
      noise_at_min = row.noise_over_eps;
    }
    if (eps >= eps_max) {
      eps_max = eps;
      ratio_at_max = row.error_over_eps;
      noise_at_max = row.noise_over_eps;
    }
    report.rows.push_back(row);
  }
  const bool shrink_pass =
      ratio_at_min <= ratio_at_max + 4.0 * (noise_at_min + noise_at_max);
  report.pass = rows_pass && shrink_pass;
  report.verdict =
      std::string(rows_pass ? "rows within noise" : "row error beyond noise") + "; error/eps " +
      format_double(ratio_at_min) + " at eps=" + format_double(eps_min) + " vs " +
      format_double(ratio_at_max) + " at eps=" + format_double(eps_max) +
      (shrink_pass ? " (no growth beyond noise)" : " (grows beyond noise)");
  return report;
}

}  // namespace sojourn
