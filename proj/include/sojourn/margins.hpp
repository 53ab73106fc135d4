#pragma once

#include <string>
#include <string_view>

namespace sojourn {

enum class MarginFamily { UniformOn01, NegExponential, StdParetoTail, StdGppTail };

// One-dimensional target/reference distributions for path margins.
class MarginSpec {
 public:
  static MarginSpec uniform01();            // F(x) = x on [0,1]
  static MarginSpec neg_exponential();      // F(x) = e^x on (-inf, 0]
  static MarginSpec std_pareto_tail(double lower);  // F(x) = 1 - 1/x for x >= lower >= 1
  static MarginSpec std_gpp_tail();         // F(x) = 1 + x on [-1, 0]

  static MarginSpec from_name(const std::string& name);

  MarginFamily family() const { return family_; }
  std::string_view name() const;

  double cdf(double x) const;
  // throws std::invalid_argument where the quantile is undefined
  double quantile(double q) const;
  double upper_endpoint() const;          // +inf for the Pareto tail
  double tail_integral(double s) const;   // int_s^upper (1 - F); +inf for the Pareto tail

 private:
  MarginSpec(MarginFamily family, double lower) : family_(family), pareto_lower_(lower) {}
  MarginFamily family_;
  double pareto_lower_;
};

}  // namespace sojourn
