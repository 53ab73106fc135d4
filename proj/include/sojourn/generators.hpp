#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sojourn/grid.hpp"
#include "sojourn/mc.hpp"
#include "sojourn/rng.hpp"

namespace sojourn {

// Nonnegative random path Z on [0,1] with E(Z_t) = 1 at every t.

enum class KernelShape { Triangular, Rectangular };

struct ConstantGenerator {};

// Deterministic unit-integral kernel at a uniform circular shift.
// Triangular: support [0,2w], peak 1/w at w.  Rectangular: height 1/w on [0,w].
struct MovingKernelGenerator {
  KernelShape shape = KernelShape::Triangular;
  double width = 0.25;
};

// Base vector under a uniform random cyclic shift, placed on anchors
// a/(d-1), a = 0..d-1, linearly interpolated in between.  The shift keeps
// E(Z_t) = mean(base) = 1 at the anchors.
struct DiscreteInterpolatedGenerator {
  std::vector<double> base;
};

// d iid unit-Frechet(shape p) anchor values scaled by 1/tgamma(1-1/p),
// anchors as above.  exponent = +inf degenerates to the constant path.
struct LogisticFrechetGenerator {
  int dim = 4;
  double exponent = 2.0;
};

using GeneratorSpec = std::variant<ConstantGenerator, MovingKernelGenerator,
                                   DiscreteInterpolatedGenerator, LogisticFrechetGenerator>;

// throws std::invalid_argument on bad parameters (kernel area off 1 by
// more than 1e-12, support outside [0,1], base mean off 1, d < 2, p <= 1, ...)
void validate(const GeneratorSpec& spec);

// closed-form generator constant: a.s. path bound for the bounded variants,
// E(max anchor value) = d^(1/p) for LogisticFrechet
double analytic_constant(const GeneratorSpec& spec);
bool is_bounded(const GeneratorSpec& spec);
int anchor_count(const GeneratorSpec& spec);

std::string describe(const GeneratorSpec& spec);
GeneratorSpec parse_generator(const std::string& text);

class GeneratorSampler {
 public:
  GeneratorSampler(GeneratorSpec spec, Grid grid);

  const GeneratorSpec& spec() const { return spec_; }
  const Grid& grid() const { return grid_; }

  // one path at the grid points; out.size() must equal grid.size()
  void sample(RandomStream& rs, std::span<double> out) const;

 private:
  GeneratorSpec spec_;
  Grid grid_;
  std::vector<int> seg_;      // anchored variants: segment per grid point
  std::vector<double> theta_;  // anchored variants: position inside segment
  double frechet_scale_ = 1.0;
};

GridFunction sample_generator_path(const GeneratorSpec& spec, const Grid& grid, RandomStream& rs);

// anchor values only, no grid placement (LogisticFrechet component check)
std::vector<double> logistic_anchor_values(const LogisticFrechetGenerator& g, RandomStream& rs);

// Monte-Carlo estimate of E(max_t Z_t) on the grid
MCEstimate generator_constant_estimate(const GeneratorSpec& spec, const Grid& grid,
                                       std::int64_t n_samples, RandomStream stream,
                                       const ExecPolicy& exec = {});

}  // namespace sojourn
