#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sojourn {

// Regular grid t_i = i/n, i = 1..n; 0 is excluded, 1 is included.
class Grid {
 public:
  explicit Grid(int n);

  int size() const { return n_; }
  double mesh() const { return 1.0 / static_cast<double>(n_); }
  double point(int j) const { return static_cast<double>(j + 1) / static_cast<double>(n_); }
  std::span<const double> points() const { return points_; }

  // index of the grid point closest to t (ties resolve upward)
  int nearest_index(double t) const;
  // index of the grid point equal to t within `tol`, throws otherwise
  int index_of(double t, double tol = 1e-9) const;

  friend bool operator==(const Grid& a, const Grid& b) { return a.n_ == b.n_; }

 private:
  int n_;
  std::vector<double> points_;
};

// Values of a function sampled on a grid; all values must be finite.
class GridFunction {
 public:
  GridFunction(Grid grid, std::vector<double> values);
  static GridFunction constant(const Grid& grid, double value);

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](int j) const { return values_[static_cast<std::size_t>(j)]; }
  int size() const { return grid_.size(); }

  double sup_abs() const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

// (1/n) sum_i g(t_i)
double riemann_mean(std::span<const double> values);
double riemann_mean(const GridFunction& g);

// (1/n) #{i : g(t_i) > level}
double occupation_above(std::span<const double> values, double level);
double occupation_above(const GridFunction& g, double level);

// Smallest level u with occupation_above(g, u) <= y, for g >= 0 and y in [0,1):
// the k-th largest value of g with k = floor(y*n) + 1, and 0 when k > n.
// Scratch variant writes the descending sort of `values` into `sorted`.
double level_for_occupation(std::span<const double> values, double y);
double level_for_occupation(const GridFunction& g, double y);
void sort_descending(std::span<const double> values, std::vector<double>& sorted);
double level_from_sorted(std::span<const double> sorted_desc, double y);

}  // namespace sojourn
