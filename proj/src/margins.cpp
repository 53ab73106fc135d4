#include "sojourn/margins.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sojourn {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

MarginSpec MarginSpec::uniform01() { return {MarginFamily::UniformOn01, 0.0}; }
MarginSpec MarginSpec::neg_exponential() { return {MarginFamily::NegExponential, 0.0}; }
MarginSpec MarginSpec::std_gpp_tail() { return {MarginFamily::StdGppTail, 0.0}; }

MarginSpec MarginSpec::std_pareto_tail(double lower) {
  if (!(lower >= 1.0)) throw std::invalid_argument("std_pareto_tail: lower must be >= 1");
  return {MarginFamily::StdParetoTail, lower};
}

MarginSpec MarginSpec::from_name(const std::string& name) {
  if (name == "uniform01") return uniform01();
  if (name == "neg-exponential") return neg_exponential();
  if (name == "std-pareto") return std_pareto_tail(1.0);
  if (name == "std-gpp") return std_gpp_tail();
  throw std::invalid_argument("MarginSpec: unknown margin '" + name + "'");
}

std::string_view MarginSpec::name() const {
  switch (family_) {
    case MarginFamily::UniformOn01: return "uniform01";
    case MarginFamily::NegExponential: return "neg-exponential";
    case MarginFamily::StdParetoTail: return "std-pareto";
    case MarginFamily::StdGppTail: return "std-gpp";
  }
  return "";
}

double MarginSpec::cdf(double x) const {
  switch (family_) {
    case MarginFamily::UniformOn01: return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x);
    case MarginFamily::NegExponential: return x > 0.0 ? 1.0 : std::exp(x);
    case MarginFamily::StdParetoTail: return x < pareto_lower_ ? 0.0 : 1.0 - 1.0 / x;
    case MarginFamily::StdGppTail: return x < -1.0 ? 0.0 : (x > 0.0 ? 1.0 : 1.0 + x);
  }
  return 0.0;
}

double MarginSpec::quantile(double q) const {
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile: q outside [0,1]");
  switch (family_) {
    case MarginFamily::UniformOn01: return q;
    case MarginFamily::NegExponential:
      if (q == 0.0) throw std::invalid_argument("quantile: undefined at 0 for neg-exponential");
      return std::log(q);
    case MarginFamily::StdParetoTail: {
      const double q_lower = 1.0 - 1.0 / pareto_lower_;
      if (q < q_lower - 1e-15 || q >= 1.0)
        throw std::invalid_argument("quantile: outside the std-pareto tail domain");
      return 1.0 / (1.0 - std::max(q, q_lower));
    }
    case MarginFamily::StdGppTail: return q - 1.0;
  }
  return 0.0;
}

double MarginSpec::upper_endpoint() const {
  switch (family_) {
    case MarginFamily::UniformOn01: return 1.0;
    case MarginFamily::NegExponential: return 0.0;
    case MarginFamily::StdParetoTail: return kInf;
    case MarginFamily::StdGppTail: return 0.0;
  }
  return 0.0;
}

double MarginSpec::tail_integral(double s) const {
  if (s >= upper_endpoint()) return 0.0;
  switch (family_) {
    case MarginFamily::UniformOn01: {
      const double a = std::max(s, 0.0);
      return 0.5 * (1.0 - a) * (1.0 - a) + (s < 0.0 ? -s : 0.0);
    }
    case MarginFamily::NegExponential:
      // int_s^0 (1 - e^x) dx
      return std::expm1(s) - s;
    case MarginFamily::StdParetoTail: return kInf;
    case MarginFamily::StdGppTail: {
      const double a = std::max(s, -1.0);
      return 0.5 * a * a + (s < -1.0 ? -1.0 - s : 0.0);
    }
  }
  return 0.0;
}

}  // namespace sojourn
