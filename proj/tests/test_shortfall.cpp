#include "doctest.h"
#include "sojourn/shortfall.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "sojourn/errors.hpp"

using namespace sojourn;

namespace {

// hand-built ensemble of flat paths on a 2-point grid with uniform01 label
PathEnsemble flat_ensemble(std::vector<double> levels) {
  const Grid grid(2);
  std::vector<double> values;
  for (double v : levels) {
    values.push_back(v);
    values.push_back(v);
  }
  EnsembleDescriptor desc;
  desc.margin = "uniform01";
  return PathEnsemble(grid, levels.size(), std::move(values), desc);
}

}  // namespace

TEST_CASE("pathwise excess integral") {
  const std::vector<double> path = {0.5, 0.9, 0.2, 1.0};
  CHECK(excess_integral(path, 0.6) == doctest::Approx(0.175));
  CHECK(excess_integral(path, 1.0) == doctest::Approx(0.0));
  CHECK(excess_integral(GridFunction(Grid(4), {0.5, 0.9, 0.2, 1.0}), 0.6) ==
        doctest::Approx(0.175));
  CHECK_THROWS_AS(excess_integral(std::span<const double>{}, 0.5), std::invalid_argument);
}

TEST_CASE("empirical shortfall conditions on an exceedance") {
  const auto e = flat_ensemble({0.95, 0.85, 0.99, 0.5});
  const auto es = expected_shortfall_empirical(e, 0.9, 2);
  CHECK(es.mean == doctest::Approx(0.07));  // mean of 0.05 and 0.09
  CHECK(es.n_samples == 2);
  CHECK(es.std_error == doctest::Approx(0.02));
  CHECK_THROWS_AS(expected_shortfall_empirical(e, 0.9, 3), floor_error);
}

TEST_CASE("sup-copula probability on exact margins") {
  const auto e = flat_ensemble({0.2, 0.8});
  CHECK(sup_copula_leq(e, 0.5).mean == doctest::Approx(0.5));
  CHECK(sup_copula_leq(e, 0.9).mean == doctest::Approx(1.0));
  CHECK_THROWS_AS(sup_copula_leq(e, 1.5), std::invalid_argument);
  const auto p = sample_perturbed_gpp(ConstantGenerator{}, PerturbationDf::StdExponential, Grid(2),
                                      5, RandomStream(3), -1e6);
  CHECK_THROWS_AS(sup_copula_leq(p, 0.5), std::invalid_argument);
}

TEST_CASE("exact shortfall from the tail integral") {
  const MCEstimate sup_prob = {0.8, 0.01, 1000};
  const auto es = expected_shortfall_exact(MarginSpec::uniform01(), sup_prob, 0.9);
  CHECK(es.mean == doctest::Approx(0.025));  // 0.005 / 0.2
  CHECK(es.std_error == doctest::Approx(0.005 * 0.01 / 0.04));

  const auto inf_es = expected_shortfall_exact(MarginSpec::std_pareto_tail(1.0), sup_prob, 2.0);
  CHECK(std::isinf(inf_es.mean));
  CHECK(inf_es.std_error == 0.0);

  CHECK_THROWS_AS(expected_shortfall_exact(MarginSpec::uniform01(), MCEstimate{1.0, 0.0, 10}, 0.9),
                  floor_error);
}

TEST_CASE("asymptotic shortfall closed form") {
  CHECK(expected_shortfall_asymptotic(MarginSpec::uniform01(), 4.0, 0.9) ==
        doctest::Approx(0.005 / (0.1 * 4.0)));
  CHECK(expected_shortfall_asymptotic(MarginSpec::uniform01(), 1.0, 1.2) == 0.0);
  CHECK(expected_shortfall_asymptotic(MarginSpec::neg_exponential(), 2.0, -1.0) ==
        doctest::Approx(std::exp(-1.0) / ((1.0 - std::exp(-1.0)) * 2.0)));
  CHECK_THROWS_AS(expected_shortfall_asymptotic(MarginSpec::std_pareto_tail(1.0), 2.0, 3.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(expected_shortfall_asymptotic(MarginSpec::uniform01(), 0.5, 0.9),
                  std::invalid_argument);
}

TEST_CASE("flat excess paths tie the three shortfall routes together") {
  // constant generator: X = 1 - U flat in t, so every route gives 0.05 at 0.9
  const auto raw = sample_gpp(ConstantGenerator{}, Grid(3), 40000, RandomStream(91), -1e6);
  const auto e = transform_margins(raw, MarginSpec::uniform01());
  const double s = 0.9;
  const auto emp = expected_shortfall_empirical(e, s, 100);
  const auto sup_prob = sup_copula_leq(e, s);
  const auto exact = expected_shortfall_exact(MarginSpec::uniform01(), sup_prob, s);
  const double asym = expected_shortfall_asymptotic(MarginSpec::uniform01(), 1.0, s);
  CHECK(asym == doctest::Approx(0.05));
  const double combined = std::hypot(emp.std_error, exact.std_error);
  CHECK(std::abs(emp.mean - exact.mean) < 4.0 * combined);
  CHECK(std::abs(emp.mean - asym) < 4.0 * emp.std_error);
}
