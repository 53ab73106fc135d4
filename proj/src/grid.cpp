#include "sojourn/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sojourn {

Grid::Grid(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("Grid: n must be >= 1");
  points_.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) points_[static_cast<std::size_t>(j)] = point(j);
}

int Grid::nearest_index(double t) const {
  const auto j = static_cast<long long>(std::llround(t * n_)) - 1;
  return static_cast<int>(std::clamp<long long>(j, 0, n_ - 1));
}

int Grid::index_of(double t, double tol) const {
  const int j = nearest_index(t);
  if (std::abs(point(j) - t) > tol)
    throw std::invalid_argument("Grid: t is not a grid point");
  return j;
}

GridFunction::GridFunction(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(grid_.size()))
    throw std::invalid_argument("GridFunction: size mismatch with grid");
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("GridFunction: non-finite value");
}

GridFunction GridFunction::constant(const Grid& grid, double value) {
  return GridFunction(grid, std::vector<double>(static_cast<std::size_t>(grid.size()), value));
}

double GridFunction::sup_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double riemann_mean(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("riemann_mean: empty");
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double riemann_mean(const GridFunction& g) { return riemann_mean(g.values()); }

double occupation_above(std::span<const double> values, double level) {
  if (values.empty()) throw std::invalid_argument("occupation_above: empty");
  std::size_t hits = 0;
  for (double v : values) hits += (v > level);
  return static_cast<double>(hits) / static_cast<double>(values.size());
}

double occupation_above(const GridFunction& g, double level) {
  return occupation_above(g.values(), level);
}

void sort_descending(std::span<const double> values, std::vector<double>& sorted) {
  sorted.assign(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
}

double level_from_sorted(std::span<const double> sorted_desc, double y) {
  const auto n = sorted_desc.size();
  // the nudge keeps y at an exact multiple of 1/n on the intended rank
  const auto k = static_cast<std::size_t>(std::floor(y * static_cast<double>(n) + 1e-9));
  return k < n ? sorted_desc[k] : 0.0;
}

double level_for_occupation(std::span<const double> values, double y) {
  if (values.empty()) throw std::invalid_argument("level_for_occupation: empty");
  if (!(y >= 0.0 && y < 1.0))
    throw std::invalid_argument("level_for_occupation: y must lie in [0,1)");
  for (double v : values)
    if (v < 0.0) throw std::invalid_argument("level_for_occupation: negative value");
  std::vector<double> sorted;
  sort_descending(values, sorted);
  return level_from_sorted(sorted, y);
}

double level_for_occupation(const GridFunction& g, double y) {
  return level_for_occupation(g.values(), y);
}

}  // namespace sojourn
