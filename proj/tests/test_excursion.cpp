#include "doctest.h"
#include "sojourn/excursion.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sojourn/errors.hpp"

using namespace sojourn;

namespace {

GridFunction flat(const Grid& grid, double v) { return GridFunction::constant(grid, v); }

GridFunction ramp(const Grid& grid) {
  std::vector<double> v(static_cast<std::size_t>(grid.size()));
  for (int j = 0; j < grid.size(); ++j) v[static_cast<std::size_t>(j)] = grid.point(j) - 1.0;
  return {grid, std::move(v)};
}

}  // namespace

TEST_CASE("remaining excursion time scans forward from the inspection point") {
  const Grid grid(10);  // points 0.1 .. 1.0, t0 = 0.3 sits at index 2
  const ThresholdSpec th(flat(grid, -1.0), 0.5);
  std::vector<double> path(10, 0.0);

  path[5] = -1.0;  // first failure three steps after t0
  CHECK(remaining_excursion_time(path, th, 0.3) == 0.3);

  path[5] = 0.0;
  path[2] = -0.6;  // not excursing at t0
  CHECK(!remaining_excursion_time(path, th, 0.3).has_value());

  path[2] = 0.0;
  path[9] = -5.0;  // the endpoint t = 1 is never inspected
  CHECK(remaining_excursion_time(path, th, 0.3) == 0.7);

  CHECK_THROWS_AS(remaining_excursion_time(std::vector<double>(4, 0.0), th, 0.3),
                  std::invalid_argument);
  CHECK_THROWS_AS(remaining_excursion_time(path, th, 1.0), std::invalid_argument);
}

TEST_CASE("default window mesh stops before the interval end") {
  const Grid grid(10);
  const auto mesh = default_u_mesh(grid, 0.3);
  REQUIRE(mesh.size() == 7);  // u = 0, 0.1, ..., 0.6
  CHECK(mesh.front() == 0.0);
  CHECK(mesh.back() == doctest::Approx(0.6));
  CHECK(default_u_mesh(grid, 0.95).size() == 1);  // last inspection point keeps u = 0
}

TEST_CASE("limit excursion law under the constant generator") {
  const Grid grid(10);
  const auto mesh = default_u_mesh(grid, 0.3);
  const auto law = excursion_survivor_theoretical(ConstantGenerator{}, flat(grid, -1.0), 0.3, mesh,
                                                  100, RandomStream(81));
  CHECK(law.t0 == doctest::Approx(0.3));
  for (std::size_t k = 0; k < law.survivor.size(); ++k) {
    CHECK(law.survivor[k] == doctest::Approx(1.0));
    CHECK(law.std_error[k] == doctest::Approx(0.0));
  }
  CHECK(law.mass_at_end == doctest::Approx(1.0));
  CHECK(law.expectation.mean == doctest::Approx(0.7));  // (n-1-j0)/n
  CHECK(law.expectation.std_error == doctest::Approx(0.0));
}

TEST_CASE("limit excursion law follows the running minimum of the threshold shape") {
  const Grid grid(4);  // ramp |f| = {0.75, 0.5, 0.25, 0}, t0 at the first point
  const std::vector<double> mesh = {0.0, 0.25, 0.5};
  const auto law = excursion_survivor_theoretical(ConstantGenerator{}, ramp(grid), 0.25, mesh, 50,
                                                  RandomStream(82));
  REQUIRE(law.survivor.size() == 3);
  CHECK(law.survivor[0] == doctest::Approx(1.0));
  CHECK(law.survivor[1] == doctest::Approx(0.5 / 0.75));
  CHECK(law.survivor[2] == doctest::Approx(0.25 / 0.75));
  CHECK(law.mass_at_end == doctest::Approx(0.0));  // |f| vanishes at t = 1
  CHECK(law.expectation.mean == doctest::Approx((0.75 + 0.5 + 0.25) / 4.0 / 0.75));

  CHECK_THROWS_AS(excursion_survivor_theoretical(ConstantGenerator{}, flat(grid, 0.0), 0.25, mesh,
                                                 50, RandomStream(83)),
                  std::invalid_argument);
  CHECK_THROWS_AS(excursion_survivor_theoretical(ConstantGenerator{}, flat(grid, -1.0), 0.25,
                                                 std::vector<double>{0.9}, 50, RandomStream(83)),
                  std::invalid_argument);  // window runs past t = 1
}

TEST_CASE("excursion law from recorded times") {
  const Grid grid(10);
  const std::vector<double> times = {0.1, 0.3, 0.3};
  const std::vector<double> mesh = {0.0, 0.1, 0.2, 0.3};
  const auto law = excursion_law_from_times(times, 0.3, mesh, grid);
  CHECK(law.survivor[0] == doctest::Approx(1.0));
  CHECK(law.survivor[1] == doctest::Approx(2.0 / 3.0));
  CHECK(law.survivor[2] == doctest::Approx(2.0 / 3.0));
  CHECK(law.survivor[3] == doctest::Approx(0.0));
  CHECK(law.mass_at_end == doctest::Approx(0.0));  // nobody reaches u = 0.7
  CHECK(law.expectation.mean == doctest::Approx(0.7 / 3.0));

  const std::vector<double> reaching = {0.7, 0.1};
  CHECK(excursion_law_from_times(reaching, 0.3, mesh, grid).mass_at_end == doctest::Approx(0.5));
  CHECK_THROWS_AS(excursion_law_from_times(std::vector<double>{}, 0.3, mesh, grid), floor_error);
}

TEST_CASE("empirical excursion law on flat excess paths") {
  // constant generator: conditioning paths never fail before the end
  const Grid grid(10);
  const auto e = sample_gpp(ConstantGenerator{}, grid, 5000, RandomStream(84), -1e6);
  const ThresholdSpec th(flat(grid, -1.0), 0.2);
  const auto mesh = default_u_mesh(grid, 0.3);
  const auto law = excursion_survivor_empirical(e, th, 0.3, mesh, 50);
  for (double sv : law.survivor) CHECK(sv == doctest::Approx(1.0));
  CHECK(law.mass_at_end == doctest::Approx(1.0));
  CHECK(law.expectation.mean == doctest::Approx(0.7));
  CHECK_THROWS_AS(excursion_survivor_empirical(e, th, 0.3, mesh, 1 << 30), floor_error);
  const auto other = sample_gpp(ConstantGenerator{}, Grid(5), 10, RandomStream(85), -1e6);
  CHECK_THROWS_AS(excursion_survivor_empirical(other, th, 0.3, mesh, 1), std::invalid_argument);
}
