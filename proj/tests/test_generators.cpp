#include "doctest.h"
#include "sojourn/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

using namespace sojourn;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("generator validation rejects bad parameters") {
  CHECK_THROWS_AS(validate(MovingKernelGenerator{KernelShape::Triangular, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate(MovingKernelGenerator{KernelShape::Triangular, 0.6}),
                  std::invalid_argument);  // support 1.2 > 1
  CHECK_NOTHROW(validate(MovingKernelGenerator{KernelShape::Rectangular, 0.6}));
  CHECK_THROWS_AS(validate(DiscreteInterpolatedGenerator{{2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(DiscreteInterpolatedGenerator{{1.5, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(DiscreteInterpolatedGenerator{{-0.5, 2.5}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(LogisticFrechetGenerator{1, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(validate(LogisticFrechetGenerator{4, 1.0}), std::invalid_argument);
  CHECK_NOTHROW(validate(LogisticFrechetGenerator{4, kInf}));
  CHECK_NOTHROW(validate(ConstantGenerator{}));
}

TEST_CASE("closed-form generator constants") {
  CHECK(analytic_constant(ConstantGenerator{}) == doctest::Approx(1.0));
  CHECK(analytic_constant(MovingKernelGenerator{KernelShape::Triangular, 0.25}) ==
        doctest::Approx(4.0));
  CHECK(analytic_constant(MovingKernelGenerator{KernelShape::Rectangular, 0.2}) ==
        doctest::Approx(5.0));
  CHECK(analytic_constant(DiscreteInterpolatedGenerator{{2.0, 0.0}}) == doctest::Approx(2.0));
  CHECK(analytic_constant(LogisticFrechetGenerator{4, 2.0}) == doctest::Approx(2.0));
  CHECK(analytic_constant(LogisticFrechetGenerator{9, 2.0}) == doctest::Approx(3.0));
  CHECK(analytic_constant(LogisticFrechetGenerator{4, kInf}) == doctest::Approx(1.0));
  CHECK(is_bounded(MovingKernelGenerator{}));
  CHECK_FALSE(is_bounded(LogisticFrechetGenerator{4, 2.0}));
  CHECK(is_bounded(LogisticFrechetGenerator{4, kInf}));
}

TEST_CASE("describe/parse round trip") {
  const GeneratorSpec specs[] = {
      ConstantGenerator{},
      MovingKernelGenerator{KernelShape::Triangular, 0.25},
      MovingKernelGenerator{KernelShape::Rectangular, 0.125},
      DiscreteInterpolatedGenerator{{1.5, 0.5, 1.0}},
      LogisticFrechetGenerator{7, 3.5},
      LogisticFrechetGenerator{4, kInf},
  };
  for (const auto& spec : specs) CHECK(describe(parse_generator(describe(spec))) == describe(spec));
  CHECK_THROWS_AS(parse_generator("banana"), std::invalid_argument);
  CHECK_THROWS_AS(parse_generator("moving-triangular width=0.25"), std::invalid_argument);
  CHECK_THROWS_AS(parse_generator("logistic d=1 p=2"), std::invalid_argument);
}

TEST_CASE("constant generator path is identically one") {
  const Grid grid(16);
  RandomStream rs(3);
  const auto path = sample_generator_path(ConstantGenerator{}, grid, rs);
  for (int j = 0; j < grid.size(); ++j) CHECK(path[j] == 1.0);
}

TEST_CASE("kernel paths are nonnegative with the right peak and mass") {
  const Grid grid(200);
  const GeneratorSpec spec = MovingKernelGenerator{KernelShape::Triangular, 0.25};
  RandomStream rs(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto path = sample_generator_path(spec, grid, rs);
    double mx = 0.0;
    for (int j = 0; j < grid.size(); ++j) {
      CHECK(path[j] >= 0.0);
      mx = std::max(mx, path[j]);
    }
    CHECK(mx <= 4.0 + 1e-12);
    CHECK(mx > 4.0 - 4.0 * 16.0 / 200.0);  // peak missed by at most one mesh step
    CHECK(riemann_mean(path) == doctest::Approx(1.0).epsilon(0.03));  // unit integral
  }
}

TEST_CASE("rectangular kernel attains its height on every path") {
  // support 0.25 always covers a grid point, so max Z = 1/w exactly
  const auto est = generator_constant_estimate(MovingKernelGenerator{KernelShape::Rectangular,
                                                                     0.25},
                                               Grid(50), 2000, RandomStream(5));
  CHECK(est.mean == doctest::Approx(4.0));
  CHECK(est.std_error == doctest::Approx(0.0));
}

TEST_CASE("discrete generator has unit mean at an anchor point") {
  const Grid grid(100);  // t = 1 is the last anchor of {2,0}
  const GeneratorSpec spec = DiscreteInterpolatedGenerator{{2.0, 0.0}};
  RandomStream rs(23);
  GeneratorSampler sampler(spec, grid);
  std::vector<double> z(100);
  double sum = 0.0;
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    RandomStream sub = rs.substream(static_cast<std::uint64_t>(i));
    sampler.sample(sub, z);
    sum += z[99];  // anchor value: 2 or 0, each with probability 1/2
    CHECK((z[99] == doctest::Approx(2.0) || z[99] == doctest::Approx(0.0)));
  }
  CHECK(sum / n == doctest::Approx(1.0).epsilon(0.07));
}

TEST_CASE("logistic anchors have unit mean") {
  const LogisticFrechetGenerator g{5, 3.0};
  RandomStream rs(31);
  double sum = 0.0;
  int count = 0;
  for (int i = 0; i < 3000; ++i) {
    for (double a : logistic_anchor_values(g, rs)) {
      CHECK(a > 0.0);
      sum += a;
      ++count;
    }
  }
  CHECK(sum / count == doctest::Approx(1.0).epsilon(0.05));
  const auto flat = logistic_anchor_values(LogisticFrechetGenerator{3, kInf}, rs);
  CHECK(flat == std::vector<double>{1.0, 1.0, 1.0});
}

TEST_CASE("generator constant estimate approaches d^(1/p) for the logistic family") {
  // exponent 3 keeps the anchor variance finite so 4 s.e. is meaningful
  const GeneratorSpec spec = LogisticFrechetGenerator{8, 3.0};
  const auto est = generator_constant_estimate(spec, Grid(700), 20000, RandomStream(8));
  const double target = std::pow(8.0, 1.0 / 3.0);
  CHECK(std::abs(est.mean - target) < std::max(4.0 * est.std_error, 0.02 * target));
}
