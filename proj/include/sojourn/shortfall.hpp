#pragma once

#include <span>

#include "sojourn/grid.hpp"
#include "sojourn/margins.hpp"
#include "sojourn/mc.hpp"
#include "sojourn/processes.hpp"

namespace sojourn {

// (1/n) sum_i (path(t_i) - s)^+
double excess_integral(std::span<const double> path, double level);
double excess_integral(const GridFunction& path, double level);

// E( int (X - s)^+ | sup X > s ); floor_error below min_exceedances
MCEstimate expected_shortfall_empirical(const PathEnsemble& ensemble, double level,
                                        int min_exceedances = 100, const ExecPolicy& exec = {});

// P(sup_t U_t <= c) on the copula scale of an ensemble with exact margins
MCEstimate sup_copula_leq(const PathEnsemble& ensemble, double c, const ExecPolicy& exec = {});

// tail_integral(s) / (1 - sup_copula_prob); +inf mean flags an infinite tail
MCEstimate expected_shortfall_exact(const MarginSpec& margin, const MCEstimate& sup_copula_prob,
                                    double level);

// tail_integral(s) / ((1 - F(s)) * m); finite-tail margins only
double expected_shortfall_asymptotic(const MarginSpec& margin, double generator_constant,
                                     double level);

}  // namespace sojourn
