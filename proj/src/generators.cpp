#include "sojourn/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "sojourn/csv.hpp"

namespace sojourn {

namespace {

constexpr double kSpecTol = 1e-12;

double kernel_support(const MovingKernelGenerator& g) {
  return g.shape == KernelShape::Triangular ? 2.0 * g.width : g.width;
}

double kernel_area(const MovingKernelGenerator& g) {
  // peak 1/w in both shapes: triangle (1/2)*2w*(1/w), box w*(1/w)
  return g.shape == KernelShape::Triangular ? 0.5 * kernel_support(g) / g.width
                                            : g.width / g.width;
}

double kernel_value(const MovingKernelGenerator& g, double x) {
  const double w = g.width;
  if (g.shape == KernelShape::Rectangular) return x < w ? 1.0 / w : 0.0;
  if (x >= 2.0 * w) return 0.0;
  return (1.0 - std::abs(x - w) / w) / w;
}

}  // namespace

void validate(const GeneratorSpec& spec) {
  struct {
    void operator()(const ConstantGenerator&) const {}
    void operator()(const MovingKernelGenerator& g) const {
      if (!(g.width > 0.0)) throw std::invalid_argument("MovingKernel: width must be > 0");
      if (kernel_support(g) > 1.0 + kSpecTol)
        throw std::invalid_argument("MovingKernel: kernel support exceeds [0,1]");
      if (std::abs(kernel_area(g) - 1.0) > kSpecTol)
        throw std::invalid_argument("MovingKernel: kernel integral differs from 1");
    }
    void operator()(const DiscreteInterpolatedGenerator& g) const {
      if (g.base.size() < 2) throw std::invalid_argument("DiscreteInterpolated: need >= 2 anchors");
      double sum = 0.0;
      for (double b : g.base) {
        if (!(b >= 0.0) || !std::isfinite(b))
          throw std::invalid_argument("DiscreteInterpolated: base values must be >= 0");
        sum += b;
      }
      if (std::abs(sum / static_cast<double>(g.base.size()) - 1.0) > kSpecTol)
        throw std::invalid_argument("DiscreteInterpolated: base mean must equal 1");
    }
    void operator()(const LogisticFrechetGenerator& g) const {
      if (g.dim < 2) throw std::invalid_argument("LogisticFrechet: dim must be >= 2");
      if (!(g.exponent > 1.0))
        throw std::invalid_argument("LogisticFrechet: exponent must be > 1");
    }
  } v;
  std::visit(v, spec);
}

double analytic_constant(const GeneratorSpec& spec) {
  struct {
    double operator()(const ConstantGenerator&) const { return 1.0; }
    double operator()(const MovingKernelGenerator& g) const { return 1.0 / g.width; }
    double operator()(const DiscreteInterpolatedGenerator& g) const {
      return *std::max_element(g.base.begin(), g.base.end());
    }
    double operator()(const LogisticFrechetGenerator& g) const {
      if (std::isinf(g.exponent)) return 1.0;
      return std::pow(static_cast<double>(g.dim), 1.0 / g.exponent);
    }
  } v;
  return std::visit(v, spec);
}

bool is_bounded(const GeneratorSpec& spec) {
  if (const auto* g = std::get_if<LogisticFrechetGenerator>(&spec)) return std::isinf(g->exponent);
  return true;
}

int anchor_count(const GeneratorSpec& spec) {
  if (const auto* g = std::get_if<DiscreteInterpolatedGenerator>(&spec))
    return static_cast<int>(g->base.size());
  if (const auto* g = std::get_if<LogisticFrechetGenerator>(&spec)) return g->dim;
  return 0;
}

std::string describe(const GeneratorSpec& spec) {
  struct {
    std::string operator()(const ConstantGenerator&) const { return "constant"; }
    std::string operator()(const MovingKernelGenerator& g) const {
      const char* shape = g.shape == KernelShape::Triangular ? "triangular" : "rectangular";
      return std::string("moving-") + shape + " w=" + format_double(g.width);
    }
    std::string operator()(const DiscreteInterpolatedGenerator& g) const {
      std::string s = "discrete base=";
      for (std::size_t i = 0; i < g.base.size(); ++i) {
        if (i) s += ',';
        s += format_double(g.base[i]);
      }
      return s;
    }
    std::string operator()(const LogisticFrechetGenerator& g) const {
      return "logistic d=" + std::to_string(g.dim) +
             " p=" + (std::isinf(g.exponent) ? std::string("inf") : format_double(g.exponent));
    }
  } v;
  return std::visit(v, spec);
}

GeneratorSpec parse_generator(const std::string& text) {
  std::istringstream in(text);
  std::string head;
  in >> head;
  auto value_of = [&](const std::string& token, const char* key) {
    const std::string prefix = std::string(key) + "=";
    if (token.rfind(prefix, 0) != 0)
      throw std::invalid_argument("parse_generator: expected " + prefix + "... in '" + text + "'");
    return token.substr(prefix.size());
  };
  std::string tok;
  GeneratorSpec spec;
  if (head == "constant") {
    spec = ConstantGenerator{};
  } else if (head == "moving-triangular" || head == "moving-rectangular") {
    in >> tok;
    spec = MovingKernelGenerator{
        head == "moving-triangular" ? KernelShape::Triangular : KernelShape::Rectangular,
        parse_double(value_of(tok, "w"))};
  } else if (head == "discrete") {
    in >> tok;
    std::vector<double> base;
    std::istringstream items(value_of(tok, "base"));
    for (std::string item; std::getline(items, item, ',');) base.push_back(parse_double(item));
    spec = DiscreteInterpolatedGenerator{std::move(base)};
  } else if (head == "logistic") {
    in >> tok;
    const int d = std::stoi(value_of(tok, "d"));
    in >> tok;
    const std::string p = value_of(tok, "p");
    spec = LogisticFrechetGenerator{
        d, p == "inf" ? std::numeric_limits<double>::infinity() : parse_double(p)};
  } else {
    throw std::invalid_argument("parse_generator: unknown generator '" + text + "'");
  }
  validate(spec);
  return spec;
}

GeneratorSampler::GeneratorSampler(GeneratorSpec spec, Grid grid)
    : spec_(std::move(spec)), grid_(grid) {
  validate(spec_);
  const int d = anchor_count(spec_);
  if (d > 0) {
    const int n = grid_.size();
    seg_.resize(static_cast<std::size_t>(n));
    theta_.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      const double x = grid_.point(j) * static_cast<double>(d - 1);
      const int seg = std::min(static_cast<int>(x), d - 2);
      seg_[static_cast<std::size_t>(j)] = seg;
      theta_[static_cast<std::size_t>(j)] = x - static_cast<double>(seg);
    }
  }
  if (const auto* g = std::get_if<LogisticFrechetGenerator>(&spec_); g && !std::isinf(g->exponent))
    frechet_scale_ = 1.0 / std::tgamma(1.0 - 1.0 / g->exponent);
}

void GeneratorSampler::sample(RandomStream& rs, std::span<double> out) const {
  if (out.size() != static_cast<std::size_t>(grid_.size()))
    throw std::invalid_argument("GeneratorSampler: output size mismatch");

  auto interpolate = [&](std::span<const double> anchors) {
    for (std::size_t j = 0; j < out.size(); ++j) {
      const auto seg = static_cast<std::size_t>(seg_[j]);
      out[j] = (1.0 - theta_[j]) * anchors[seg] + theta_[j] * anchors[seg + 1];
    }
  };

  if (std::holds_alternative<ConstantGenerator>(spec_)) {
    std::fill(out.begin(), out.end(), 1.0);
  } else if (const auto* mk = std::get_if<MovingKernelGenerator>(&spec_)) {
    const double shift = rs.uniform01();
    for (std::size_t j = 0; j < out.size(); ++j) {
      double x = grid_.point(static_cast<int>(j)) - shift;
      if (x < 0.0) x += 1.0;
      out[j] = kernel_value(*mk, x);
    }
  } else if (const auto* di = std::get_if<DiscreteInterpolatedGenerator>(&spec_)) {
    const auto d = di->base.size();
    const auto shift =
        std::min(d - 1, static_cast<std::size_t>(rs.uniform01() * static_cast<double>(d)));
    static thread_local std::vector<double> anchors;
    anchors.resize(d);
    for (std::size_t a = 0; a < d; ++a) anchors[a] = di->base[(a + shift) % d];
    interpolate(anchors);
  } else {
    const auto& lf = std::get<LogisticFrechetGenerator>(spec_);
    if (std::isinf(lf.exponent)) {
      std::fill(out.begin(), out.end(), 1.0);
      return;
    }
    static thread_local std::vector<double> anchors;
    anchors.resize(static_cast<std::size_t>(lf.dim));
    for (auto& a : anchors) a = rs.frechet(lf.exponent) * frechet_scale_;
    interpolate(anchors);
  }
}

GridFunction sample_generator_path(const GeneratorSpec& spec, const Grid& grid, RandomStream& rs) {
  GeneratorSampler sampler(spec, grid);
  std::vector<double> out(static_cast<std::size_t>(grid.size()));
  sampler.sample(rs, out);
  return GridFunction(grid, std::move(out));
}

std::vector<double> logistic_anchor_values(const LogisticFrechetGenerator& g, RandomStream& rs) {
  validate(GeneratorSpec{g});
  std::vector<double> out(static_cast<std::size_t>(g.dim), 1.0);
  if (!std::isinf(g.exponent)) {
    const double scale = 1.0 / std::tgamma(1.0 - 1.0 / g.exponent);
    for (auto& a : out) a = rs.frechet(g.exponent) * scale;
  }
  return out;
}

MCEstimate generator_constant_estimate(const GeneratorSpec& spec, const Grid& grid,
                                       std::int64_t n_samples, RandomStream stream,
                                       const ExecPolicy& exec) {
  if (n_samples < 1) throw std::invalid_argument("generator_constant_estimate: need samples");
  const GeneratorSampler sampler(spec, grid);
  auto acc = parallel_reduce<MeanVarAccumulator>(
      n_samples, exec, [] { return MeanVarAccumulator{}; },
      [&](std::int64_t begin, std::int64_t end, MeanVarAccumulator& a) {
        std::vector<double> z(static_cast<std::size_t>(grid.size()));
        for (std::int64_t i = begin; i < end; ++i) {
          RandomStream rs = stream.substream(static_cast<std::uint64_t>(i));
          sampler.sample(rs, z);
          a.add(*std::max_element(z.begin(), z.end()));
        }
      });
  return acc.estimate();
}

}  // namespace sojourn
