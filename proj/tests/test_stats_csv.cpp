#include "doctest.h"
#include "sojourn/csv.hpp"
#include "sojourn/stats.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "sojourn/rng.hpp"

using namespace sojourn;

TEST_CASE("ks statistic against a cdf") {
  // two points at the uniform quartiles: F_n jumps 0->0.5 at 0.25, 0.5->1 at 0.75
  const std::vector<double> sample = {0.75, 0.25};
  const auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
  CHECK(ks_statistic(sample, uniform) == doctest::Approx(0.25));
  const std::vector<double> perfect = {0.25, 0.75};
  CHECK(ks_statistic(perfect, uniform) == doctest::Approx(0.25));
  CHECK_THROWS_AS(ks_statistic(std::vector<double>{}, uniform), std::invalid_argument);
}

TEST_CASE("ks critical value shrinks with the sample") {
  CHECK(ks_critical(0.01, 100) == doctest::Approx(std::sqrt(-std::log(0.005) / 2.0) / 10.0));
  CHECK(ks_critical(0.01, 400) == doctest::Approx(ks_critical(0.01, 100) / 2.0));
  CHECK(ks_critical(0.05, 100) < ks_critical(0.01, 100));
}

TEST_CASE("two-sample ks statistic") {
  const std::vector<double> a = {1.0, 2.0, 3.0};
  CHECK(ks_two_sample_statistic(a, a) == doctest::Approx(0.0));
  const std::vector<double> b = {10.0, 11.0};
  CHECK(ks_two_sample_statistic(a, b) == doctest::Approx(1.0));  // disjoint supports
  const std::vector<double> c = {1.5, 2.5};
  CHECK(ks_two_sample_statistic(a, c) == doctest::Approx(1.0 / 3.0));
  CHECK(ks_two_sample_critical(0.01, 100, 100) > ks_two_sample_critical(0.01, 1000, 1000));
}

TEST_CASE("uniform draws pass their own ks test") {
  RandomStream rs(123);
  std::vector<double> sample(2000);
  for (auto& x : sample) x = rs.uniform01();
  CHECK(ks_statistic(sample, [](double x) { return std::clamp(x, 0.0, 1.0); }) <
        ks_critical(0.01, sample.size()));
}

TEST_CASE("double formatting round trips bitwise") {
  for (double x : {0.1, 1.0 / 3.0, 1e-4, 12345.6789, -0.0, 5e-324,
                   std::numeric_limits<double>::max()}) {
    CHECK(parse_double(format_double(x)) == x);
  }
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(parse_double("-inf") == -std::numeric_limits<double>::infinity());
  CHECK(std::isnan(parse_double(format_double(std::nan("")))));
  CHECK(parse_double("1e-04") == 1e-4);
  CHECK_THROWS_AS(parse_double("12,3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_double(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_double("0.5x"), std::invalid_argument);
}

TEST_CASE("csv writer and splitter") {
  std::ostringstream out;
  CsvWriter w(out);
  w.comment("seed = 7");
  const std::vector<std::string> head = {"a", "b"};
  w.header(head);
  const std::vector<double> vals = {0.5, -1.0};
  w.row(vals);
  CHECK(out.str() == "# seed = 7\na,b\n0.5,-1\n");

  const auto cells = split_csv_line("0.5,-1,x");
  REQUIRE(cells.size() == 3);
  CHECK(cells[0] == "0.5");
  CHECK(cells[1] == "-1");
  CHECK(cells[2] == "x");
  CHECK(split_csv_line("").size() == 1);
  CHECK(split_csv_line("a,").back() == "");
}
