#include "doctest.h"
#include "sojourn/functionals.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

using namespace sojourn;

namespace {

GridFunction ramp(const Grid& grid) {
  std::vector<double> v(static_cast<std::size_t>(grid.size()));
  for (int j = 0; j < grid.size(); ++j) v[static_cast<std::size_t>(j)] = grid.point(j) - 1.0;
  return {grid, std::move(v)};
}

}  // namespace

TEST_CASE("dnorm is deterministic under the constant generator") {
  // Z == 1, so the norm collapses to sup |f|
  const Grid grid(4);
  const auto est = dnorm_estimate(ConstantGenerator{}, ramp(grid), 50, RandomStream(1));
  CHECK(est.mean == doctest::Approx(0.75));
  CHECK(est.std_error == doctest::Approx(0.0));
  CHECK(est.n_samples == 50);
  CHECK_THROWS_AS(dnorm_estimate(ConstantGenerator{}, ramp(grid), 0, RandomStream(1)),
                  std::invalid_argument);
}

TEST_CASE("dnorm of the kernel generator against the unit-height threshold") {
  // E sup Z = 1/w for the rectangular kernel once the support covers a grid point
  const Grid grid(80);
  const GridFunction f(grid, std::vector<double>(80, -1.0));
  const auto est = dnorm_estimate(MovingKernelGenerator{KernelShape::Rectangular, 0.25}, f, 500,
                                  RandomStream(2));
  CHECK(est.mean == doctest::Approx(4.0));
  CHECK(est.std_error == doctest::Approx(0.0));
}

TEST_CASE("min over indices with the constant generator") {
  const Grid grid(10);
  const GridFunction f(grid, std::vector<double>(10, -1.0));
  const std::array<int, 3> idx = {1, 4, 7};
  const auto est = min_over_indices_estimate(ConstantGenerator{}, f, idx, 40, RandomStream(3));
  CHECK(est.mean == doctest::Approx(1.0));
  CHECK(est.std_error == doctest::Approx(0.0));
  CHECK_THROWS_AS(min_over_indices_estimate(ConstantGenerator{}, f, std::span<const int>{}, 40,
                                            RandomStream(3)),
                  std::invalid_argument);
  const std::array<int, 1> bad = {10};
  CHECK_THROWS_AS(min_over_indices_estimate(ConstantGenerator{}, f, bad, 40, RandomStream(3)),
                  std::invalid_argument);
}

TEST_CASE("window minimum matches the scaled threshold") {
  const Grid grid(10);
  std::vector<double> v(10);
  for (int j = 0; j < 10; ++j) v[static_cast<std::size_t>(j)] = -2.0;
  const GridFunction f(grid, std::move(v));
  const auto est = min_functional_estimate(ConstantGenerator{}, f, 0.2, 0.6, 30, RandomStream(4));
  CHECK(est.mean == doctest::Approx(2.0));
  CHECK_THROWS_AS(min_functional_estimate(ConstantGenerator{}, f, 0.7, 0.2, 30, RandomStream(4)),
                  std::invalid_argument);
  // degenerate window still snaps to one grid point
  const auto pt = min_functional_estimate(ConstantGenerator{}, f, 0.5, 0.5, 30, RandomStream(4));
  CHECK(pt.mean == doctest::Approx(2.0));
}

TEST_CASE("finite-dimensional limit values under the constant generator") {
  const Grid grid(4);
  const std::array<double, 2> times = {0.25, 0.75};
  const std::array<double, 2> x = {-2.0, -1.0};
  const auto est = fidis_evd_value(ConstantGenerator{}, grid, times, x, 60, RandomStream(5));
  CHECK(est.mean == doctest::Approx(std::exp(-2.0)));
  CHECK(est.std_error == doctest::Approx(0.0));

  const std::array<double, 1> t1 = {0.5};
  const std::array<double, 1> x1 = {-1.0};
  CHECK(fidis_evd_value(ConstantGenerator{}, grid, t1, x1, 60, RandomStream(5)).mean ==
        doctest::Approx(std::exp(-1.0)));

  const std::array<double, 1> bad_x = {0.5};
  CHECK_THROWS_AS(fidis_evd_value(ConstantGenerator{}, grid, t1, bad_x, 60, RandomStream(5)),
                  std::invalid_argument);
  const std::array<double, 1> off_grid = {0.3};
  CHECK_THROWS_AS(fidis_evd_value(ConstantGenerator{}, grid, off_grid, x1, 60, RandomStream(5)),
                  std::invalid_argument);
  CHECK_THROWS_AS(fidis_evd_value(ConstantGenerator{}, grid, std::span<const double>{},
                                  std::span<const double>{}, 60, RandomStream(5)),
                  std::invalid_argument);
}
