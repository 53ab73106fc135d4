#include "sojourn/shortfall.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "sojourn/errors.hpp"

namespace sojourn {

double excess_integral(std::span<const double> path, double level) {
  if (path.empty()) throw std::invalid_argument("excess_integral: empty path");
  double s = 0.0;
  for (double v : path) s += std::max(v - level, 0.0);
  return s / static_cast<double>(path.size());
}

double excess_integral(const GridFunction& path, double level) {
  return excess_integral(path.values(), level);
}

MCEstimate expected_shortfall_empirical(const PathEnsemble& ensemble, double level,
                                        int min_exceedances, const ExecPolicy& exec) {
  struct Acc {
    MeanVarAccumulator excess;
    void merge(const Acc& o) { excess.merge(o.excess); }
  };
  auto acc = parallel_reduce<Acc>(
      static_cast<std::int64_t>(ensemble.n_paths()), exec, [] { return Acc{}; },
      [&](std::int64_t begin, std::int64_t end, Acc& a) {
        for (std::int64_t i = begin; i < end; ++i) {
          const auto path = ensemble.path(static_cast<std::size_t>(i));
          bool exceeds = false;
          for (double v : path)
            if (v > level) {
              exceeds = true;
              break;
            }
          if (exceeds) a.excess.add(excess_integral(path, level));
        }
      });
  if (std::cmp_less(acc.excess.count(), min_exceedances))
    throw floor_error("expected_shortfall_empirical: " + std::to_string(acc.excess.count()) +
                      " exceeding paths < floor " + std::to_string(min_exceedances));
  return acc.excess.estimate();
}

MCEstimate sup_copula_leq(const PathEnsemble& ensemble, double c, const ExecPolicy& exec) {
  if (!(c >= 0.0 && c <= 1.0)) throw std::invalid_argument("sup_copula_leq: c outside [0,1]");
  const auto& desc = ensemble.descriptor();
  if (!has_exact_margins(desc))
    throw std::invalid_argument("sup_copula_leq: ensemble margins not known in closed form");
  struct Count {
    std::int64_t hits = 0;
    void merge(const Count& o) { hits += o.hits; }
  };
  auto got = parallel_reduce<Count>(
      static_cast<std::int64_t>(ensemble.n_paths()), exec, [] { return Count{}; },
      [&](std::int64_t begin, std::int64_t end, Count& cnt) {
        for (std::int64_t i = begin; i < end; ++i) {
          const auto path = ensemble.path(static_cast<std::size_t>(i));
          bool all_leq = true;
          for (double v : path)
            if (ensemble_cdf(desc, v) > c) {
              all_leq = false;
              break;
            }
          cnt.hits += all_leq;
        }
      });
  return estimate_proportion(got.hits, static_cast<std::int64_t>(ensemble.n_paths()));
}

MCEstimate expected_shortfall_exact(const MarginSpec& margin, const MCEstimate& sup_copula_prob,
                                    double level) {
  const double tail = margin.tail_integral(level);
  const double denom = 1.0 - sup_copula_prob.mean;
  if (!(denom > 0.0))
    throw floor_error("expected_shortfall_exact: P(sup <= s) estimate at 1, denominator 0");
  if (std::isinf(tail))
    return {std::numeric_limits<double>::infinity(), 0.0, sup_copula_prob.n_samples};
  const double es = tail / denom;
  return {es, tail * sup_copula_prob.std_error / (denom * denom), sup_copula_prob.n_samples};
}

double expected_shortfall_asymptotic(const MarginSpec& margin, double generator_constant,
                                     double level) {
  if (!(generator_constant >= 1.0))
    throw std::invalid_argument("expected_shortfall_asymptotic: generator constant must be >= 1");
  const double omega = margin.upper_endpoint();
  if (std::isinf(omega))
    throw std::invalid_argument(
        "expected_shortfall_asymptotic: needs a finite-tail margin (tail integral diverges)");
  if (level >= omega) return 0.0;
  const double one_minus_f = 1.0 - margin.cdf(level);
  if (!(one_minus_f > 0.0))
    throw std::invalid_argument("expected_shortfall_asymptotic: level outside the support");
  return margin.tail_integral(level) / (one_minus_f * generator_constant);
}

}  // namespace sojourn
