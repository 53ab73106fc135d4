#include "doctest.h"
#include "sojourn/grid.hpp"
#include "sojourn/rng.hpp"

#include <stdexcept>
#include <vector>

using namespace sojourn;

TEST_CASE("grid points exclude 0 and include 1") {
  const Grid g(4);
  CHECK(g.size() == 4);
  CHECK(g.mesh() == doctest::Approx(0.25));
  CHECK(g.point(0) == doctest::Approx(0.25));
  CHECK(g.point(3) == doctest::Approx(1.0));
  CHECK(Grid(1).point(0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(Grid(0), std::invalid_argument);
}

TEST_CASE("nearest_index and index_of") {
  const Grid g(4);
  CHECK(g.nearest_index(0.25) == 0);
  CHECK(g.nearest_index(0.3) == 0);
  CHECK(g.nearest_index(0.4) == 1);
  CHECK(g.nearest_index(0.0) == 0);
  CHECK(g.nearest_index(1.0) == 3);
  CHECK(g.index_of(0.5) == 1);
  CHECK(g.index_of(1.0) == 3);
  CHECK_THROWS_AS(g.index_of(0.3), std::invalid_argument);
}

TEST_CASE("grid function validates values") {
  const Grid g(3);
  CHECK_THROWS_AS(GridFunction(g, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(GridFunction(g, {1.0, 2.0, std::numeric_limits<double>::quiet_NaN()}),
                  std::invalid_argument);
  const GridFunction f(g, {1.0, -3.0, 2.0});
  CHECK(f.sup_abs() == doctest::Approx(3.0));
  CHECK(f[1] == doctest::Approx(-3.0));
  CHECK(GridFunction::constant(g, -1.0).sup_abs() == doctest::Approx(1.0));
}

TEST_CASE("riemann mean of identity on the grid") {
  const Grid g(4);
  std::vector<double> t(g.points().begin(), g.points().end());
  CHECK(riemann_mean(t) == doctest::Approx(0.625));  // (1/4)(.25+.5+.75+1)
}

TEST_CASE("occupation counts strict exceedances") {
  const std::vector<double> v = {0.0, 1.0, 2.0, 3.0};
  CHECK(occupation_above(v, 2.5) == doctest::Approx(0.25));
  CHECK(occupation_above(v, 2.0) == doctest::Approx(0.25));  // strict: 2 does not count
  CHECK(occupation_above(v, -1.0) == doctest::Approx(1.0));
}

TEST_CASE("level_for_occupation picks the (floor(yn)+1)-th largest value") {
  const std::vector<double> v = {3.0, 1.0, 2.0, 0.0};
  CHECK(level_for_occupation(v, 0.0) == doctest::Approx(3.0));
  CHECK(level_for_occupation(v, 0.5) == doctest::Approx(1.0));
  CHECK(level_for_occupation(v, 0.75) == doctest::Approx(0.0));
  CHECK(level_for_occupation(v, 0.9) == doctest::Approx(0.0));
  CHECK_THROWS_AS(level_for_occupation(v, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(level_for_occupation(std::vector<double>{-1.0, 2.0}, 0.5),
                  std::invalid_argument);
}

TEST_CASE("level/occupation duality on random nonnegative functions") {
  RandomStream rs(42);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(16);
    for (auto& x : v) x = rs.uniform01() * 5.0;
    for (double y : {0.0, 0.2, 0.5, 0.8}) {
      const double u = level_for_occupation(v, y);
      CHECK(occupation_above(v, u) <= y + 1e-12);
    }
  }
}

TEST_CASE("sorted-scratch variant matches the direct one") {
  const std::vector<double> v = {0.4, 2.5, 1.1, 0.0, 2.5};
  std::vector<double> sorted;
  sort_descending(v, sorted);
  CHECK(sorted.front() == doctest::Approx(2.5));
  CHECK(sorted.back() == doctest::Approx(0.0));
  for (double y : {0.0, 0.3, 0.6, 0.99})
    CHECK(level_from_sorted(sorted, y) == doctest::Approx(level_for_occupation(v, y)));
}

TEST_CASE("rank lookup survives inexact multiples of 1/n") {
  // 29/100.0 times 100 lands just below 29 in floating point; the intended
  // rank is still 29
  std::vector<double> sorted(100);
  for (int k = 0; k < 100; ++k) sorted[static_cast<std::size_t>(k)] = 100.0 - k;
  CHECK(level_from_sorted(sorted, 29.0 / 100.0) == doctest::Approx(71.0));
  CHECK(level_from_sorted(sorted, 57.0 / 100.0) == doctest::Approx(43.0));
  CHECK(level_from_sorted(sorted, 58.0 / 100.0) == doctest::Approx(42.0));
  CHECK(level_from_sorted(sorted, 0.0) == doctest::Approx(100.0));
  CHECK(level_from_sorted(sorted, 0.995) == doctest::Approx(1.0));
  CHECK(level_from_sorted(sorted, 1.0) == doctest::Approx(0.0));
}
