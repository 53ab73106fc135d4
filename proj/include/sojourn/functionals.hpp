#pragma once

#include <cstdint>
#include <span>

#include "sojourn/generators.hpp"
#include "sojourn/grid.hpp"
#include "sojourn/mc.hpp"
#include "sojourn/rng.hpp"

namespace sojourn {

// E(max_t |f(t)| Z_t), the norm that the generator induces on grid functions
MCEstimate dnorm_estimate(const GeneratorSpec& spec, const GridFunction& f, std::int64_t n_samples,
                          RandomStream stream, const ExecPolicy& exec = {});

// E(min over selected grid indices of |f| Z); indices must be nonempty
MCEstimate min_over_indices_estimate(const GeneratorSpec& spec, const GridFunction& f,
                                     std::span<const int> indices, std::int64_t n_samples,
                                     RandomStream stream, const ExecPolicy& exec = {});

// window [a,b] in [0,1], endpoints snapped to grid points (a = b allowed)
MCEstimate min_functional_estimate(const GeneratorSpec& spec, const GridFunction& f, double a,
                                   double b, std::int64_t n_samples, RandomStream stream,
                                   const ExecPolicy& exec = {});

// value at x (all x_i <= 0) of the limiting joint df over the given grid
// times: exp(-E max_i |x_i| Z_{t_i}), with the error propagated through exp
MCEstimate fidis_evd_value(const GeneratorSpec& spec, const Grid& grid,
                           std::span<const double> times, std::span<const double> x,
                           std::int64_t n_samples, RandomStream stream,
                           const ExecPolicy& exec = {});

}  // namespace sojourn
