#pragma once

#include <functional>
#include <span>
#include <vector>

namespace sojourn {

// sup |F_n - F| for a sample (need not be sorted) against a cdf
double ks_statistic(std::span<const double> sample, const std::function<double(double)>& cdf);

double ks_two_sample_statistic(std::span<const double> a, std::span<const double> b);

// asymptotic critical value c(alpha)/sqrt(n), c = sqrt(-ln(alpha/2)/2)
double ks_critical(double alpha, std::size_t n);
double ks_two_sample_critical(double alpha, std::size_t n, std::size_t m);

}  // namespace sojourn
