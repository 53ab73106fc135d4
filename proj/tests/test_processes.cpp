#include "doctest.h"
#include "sojourn/processes.hpp"
#include "sojourn/stats.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <vector>

using namespace sojourn;

namespace {

std::vector<double> first_values(const PathEnsemble& e) {
  std::vector<double> out;
  out.reserve(e.n_paths());
  for (std::size_t i = 0; i < e.n_paths(); ++i) out.push_back(e.path(i)[0]);
  return out;
}

struct TempPair {
  std::filesystem::path csv, meta;
  TempPair() {
    const auto dir = std::filesystem::temp_directory_path();
    csv = dir / "sojourn_test_paths.csv";
    meta = dir / "sojourn_test_paths.meta";
  }
  ~TempPair() {
    std::error_code ec;
    std::filesystem::remove(csv, ec);
    std::filesystem::remove(meta, ec);
  }
};

}  // namespace

TEST_CASE("constant-generator excess paths are flat uniforms on (-1,0)") {
  const Grid grid(5);
  const auto e = sample_gpp(ConstantGenerator{}, grid, 4000, RandomStream(11), -1e6);
  for (std::size_t i = 0; i < e.n_paths(); ++i) {
    const auto p = e.path(i);
    CHECK(p[0] > -1.0);
    CHECK(p[0] < 0.0);
    for (int j = 1; j < grid.size(); ++j) CHECK(p[static_cast<std::size_t>(j)] == p[0]);
  }
  const auto v = first_values(e);
  CHECK(ks_statistic(v, [](double x) { return std::clamp(1.0 + x, 0.0, 1.0); }) <
        ks_critical(0.01, v.size()));
}

TEST_CASE("kernel excess process matches its tail margin") {
  // P(V_t > x) = |x| holds on (-1/m, 0); probe x = -0.2 with m = 4
  const Grid grid(40);
  const GeneratorSpec spec = MovingKernelGenerator{KernelShape::Triangular, 0.25};
  const auto e = sample_gpp(spec, grid, 20000, RandomStream(12), default_clip_floor(spec));
  std::size_t hits = 0;
  for (std::size_t i = 0; i < e.n_paths(); ++i) hits += (e.path(i)[7] > -0.2);
  const double p = static_cast<double>(hits) / static_cast<double>(e.n_paths());
  CHECK(std::abs(p - 0.2) < 4.0 * std::sqrt(0.2 * 0.8 / static_cast<double>(e.n_paths())));
  CHECK(e.truncation_bound() == 0.0);
  CHECK(e.descriptor().margin == "standard-gpp");
}

TEST_CASE("clip floor bounds the paths below") {
  const auto e = sample_gpp(ConstantGenerator{}, Grid(3), 500, RandomStream(13), -1.0);
  for (std::size_t i = 0; i < e.n_paths(); ++i) CHECK(e.path(i)[0] >= -1.0);
  CHECK_THROWS_AS(sample_gpp(ConstantGenerator{}, Grid(3), 10, RandomStream(13), -0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_gpp(ConstantGenerator{}, Grid(3), 0, RandomStream(13), -1e6),
                  std::invalid_argument);
}

TEST_CASE("chunked generation reproduces the one-shot ensemble bitwise") {
  const Grid grid(20);
  const GeneratorSpec spec = MovingKernelGenerator{KernelShape::Triangular, 0.25};
  RandomStream root(77);
  const auto whole = sample_gpp(spec, grid, 40, root, -1e6);
  const auto head = sample_gpp(spec, grid, 25, root, -1e6, {}, 0);
  const auto tail = sample_gpp(spec, grid, 15, root, -1e6, {}, 25);
  for (std::size_t i = 0; i < 25; ++i)
    for (int j = 0; j < grid.size(); ++j)
      CHECK(whole.path(i)[static_cast<std::size_t>(j)] == head.path(i)[static_cast<std::size_t>(j)]);
  for (std::size_t i = 0; i < 15; ++i)
    for (int j = 0; j < grid.size(); ++j)
      CHECK(whole.path(25 + i)[static_cast<std::size_t>(j)] ==
            tail.path(i)[static_cast<std::size_t>(j)]);
}

TEST_CASE("worker count does not change the sample") {
  const Grid grid(15);
  const GeneratorSpec spec = MovingKernelGenerator{KernelShape::Rectangular, 0.25};
  ExecPolicy one{1}, four{4};
  const auto a = sample_msp(spec, grid, 60, RandomStream(5), {}, one);
  const auto b = sample_msp(spec, grid, 60, RandomStream(5), {}, four);
  REQUIRE(a.values().size() == b.values().size());
  for (std::size_t k = 0; k < a.values().size(); ++k) CHECK(a.values()[k] == b.values()[k]);
}

TEST_CASE("regenerate rebuilds the ensemble from its descriptor") {
  const Grid grid(10);
  const GeneratorSpec spec = DiscreteInterpolatedGenerator{{1.5, 0.5, 1.0}};
  const auto a = sample_gpp(spec, grid, 30, RandomStream(99), -1e6, {}, 7);
  const auto b = regenerate_ensemble(a.descriptor(), grid, 30);
  for (std::size_t k = 0; k < a.values().size(); ++k) CHECK(a.values()[k] == b.values()[k]);
  const auto t = transform_margins(a, MarginSpec::uniform01());
  CHECK_THROWS_AS(regenerate_ensemble(t.descriptor(), grid, 30), std::invalid_argument);
}

TEST_CASE("constant-generator max-stable paths have exponential margins") {
  // eta = -Gamma_1 with a constant generator: the first Poisson arrival decides
  const Grid grid(4);
  const auto e = sample_msp(ConstantGenerator{}, grid, 3000, RandomStream(21));
  CHECK(e.truncation_bound() == 0.0);
  CHECK(e.descriptor().margin == "standard-msp");
  std::vector<double> flipped;
  for (std::size_t i = 0; i < e.n_paths(); ++i) {
    const auto p = e.path(i);
    CHECK(p[0] < 0.0);
    for (int j = 1; j < grid.size(); ++j) CHECK(p[static_cast<std::size_t>(j)] == p[0]);
    flipped.push_back(-p[0]);
  }
  CHECK(ks_statistic(flipped, [](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x); }) <
        ks_critical(0.01, flipped.size()));
}

TEST_CASE("simple max-stable variant has unit-Frechet margins") {
  const auto e = sample_simple_msp(ConstantGenerator{}, Grid(3), 3000, RandomStream(22));
  CHECK(e.descriptor().margin == "frechet");
  const auto v = first_values(e);
  for (double x : v) CHECK(x > 0.0);
  CHECK(ks_statistic(v, [](double x) { return x <= 0.0 ? 0.0 : std::exp(-1.0 / x); }) <
        ks_critical(0.01, v.size()));
}

TEST_CASE("unbounded generators require a truncation budget") {
  const Grid grid(8);
  const GeneratorSpec spec = LogisticFrechetGenerator{3, 2.0};
  CHECK_THROWS_AS(sample_msp(spec, grid, 5, RandomStream(1)), std::invalid_argument);
  CHECK_THROWS_AS(sample_msp(spec, grid, 5, RandomStream(1), -0.5), std::invalid_argument);
  const auto e = sample_msp(spec, grid, 50, RandomStream(1), 1e-4);
  CHECK(e.truncation_bound() > 0.0);
  CHECK(e.truncation_bound() <= 1e-4);
  CHECK(e.descriptor().trunc_epsilon == 1e-4);
}

TEST_CASE("margin transform pushes the tail onto the target scale") {
  const auto e = sample_gpp(ConstantGenerator{}, Grid(3), 2000, RandomStream(31), -1e6);
  const auto u = transform_margins(e, MarginSpec::uniform01());
  CHECK(u.descriptor().margin == "uniform01");
  const auto v = first_values(u);
  for (std::size_t i = 0; i < v.size(); ++i) {
    CHECK(v[i] > 0.0);
    CHECK(v[i] < 1.0);
    CHECK(v[i] == doctest::Approx(1.0 + e.path(i)[0]).epsilon(1e-12));
  }
  const auto g = transform_margins(u, MarginSpec::std_gpp_tail());
  for (std::size_t i = 0; i < v.size(); ++i)
    CHECK(g.path(i)[0] == doctest::Approx(e.path(i)[0]).epsilon(1e-12));
  const auto p = sample_perturbed_gpp(ConstantGenerator{}, PerturbationDf::StdExponential, Grid(3),
                                      10, RandomStream(32), -1e6);
  CHECK(p.descriptor().margin == "perturbed-gpp");
  CHECK_THROWS_AS(transform_margins(p, MarginSpec::uniform01()), std::invalid_argument);
}

TEST_CASE("perturbed variant records its perturbation") {
  const auto p = sample_perturbed_gpp(ConstantGenerator{}, PerturbationDf::StdExponential, Grid(4),
                                      2500, RandomStream(41), -1e6);
  REQUIRE(p.descriptor().perturbation.has_value());
  CHECK(*p.descriptor().perturbation == PerturbationDf::StdExponential);
  // constant generator: V = -W with W ~ Exp(1)
  std::vector<double> flipped;
  for (std::size_t i = 0; i < p.n_paths(); ++i) flipped.push_back(-p.path(i)[0]);
  CHECK(ks_statistic(flipped, [](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x); }) <
        ks_critical(0.01, flipped.size()));
}

TEST_CASE("ensemble csv round trip is bitwise") {
  TempPair files;
  const Grid grid(6);
  const GeneratorSpec spec = MovingKernelGenerator{KernelShape::Triangular, 0.25};
  const auto e = sample_gpp(spec, grid, 25, RandomStream(55), default_clip_floor(spec), {}, 3);
  write_ensemble_csv(e, files.csv, files.meta);
  const auto back = read_ensemble_csv(files.csv, files.meta);
  CHECK(back.n_paths() == e.n_paths());
  CHECK(back.grid().size() == grid.size());
  REQUIRE(back.values().size() == e.values().size());
  for (std::size_t k = 0; k < e.values().size(); ++k) CHECK(back.values()[k] == e.values()[k]);
  CHECK(back.descriptor().seed == e.descriptor().seed);
  CHECK(back.descriptor().first_path == 3);
  CHECK(describe(back.descriptor().generator) == describe(spec));
  CHECK(back.descriptor().margin == "standard-gpp");
  // the regenerated ensemble must agree with the file contents
  const auto regen = regenerate_ensemble(back.descriptor(), back.grid(), back.n_paths());
  for (std::size_t k = 0; k < e.values().size(); ++k) CHECK(regen.values()[k] == e.values()[k]);
}
