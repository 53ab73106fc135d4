#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sojourn/functionals.hpp"
#include "sojourn/generators.hpp"
#include "sojourn/grid.hpp"
#include "sojourn/mc.hpp"
#include "sojourn/processes.hpp"
#include "sojourn/rng.hpp"

namespace sojourn {

inline constexpr int kMaxInclusionExclusionPoints = 12;

// P(eta_{t_i} > s f(t_i) for all i) by inclusion-exclusion over the limiting
// joint df: 1 - sum over nonempty subsets T of (-1)^(|T|-1) exp(-s E max_T
// |f| Z).  Subset means share one generator sample set; at most 12 points.
MCEstimate survivor_via_inclusion_exclusion(const GeneratorSpec& spec, const GridFunction& f,
                                            std::span<const int> indices, double level,
                                            std::int64_t n_samples, RandomStream stream,
                                            const ExecPolicy& exec = {});

// alternating subset-max sum collapses to the min (exact identity, k <= 12)
bool maxmin_identity_check(std::span<const double> a, double rel_tol = 1e-12);

struct CopulaCheckRow {
  double eps = 0.0;
  double empirical = 0.0;
  double empirical_se = 0.0;
  double expansion = 0.0;
  double expansion_se = 0.0;
  double error_over_eps = 0.0;
  double noise_over_eps = 0.0;
};

struct CopulaCheckReport {
  std::vector<CopulaCheckRow> rows;
  bool pass = false;
  std::string verdict;
};

// Compares P(all U_{t_i} <= 1 - eps w_i) on the copula scale of a GPP
// ensemble against the first-order expansion 1 - eps E(max w Z) for eps in
// `eps_values`.  The expansion is exact below the scale cap, so agreement is
// asserted within Monte-Carlo noise (plus an O(eps^2) allowance) and the
// error ratio across eps only up to combined noise.
CopulaCheckReport copula_expansion_check(const PathEnsemble& ensemble,
                                         std::span<const double> times,
                                         std::span<const double> weights,
                                         std::span<const double> eps_values,
                                         std::int64_t n_expansion_samples, RandomStream stream,
                                         const ExecPolicy& exec = {});

}  // namespace sojourn
