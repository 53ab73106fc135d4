#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sojourn {

struct CheckResult {
  std::string id;
  std::string note;
  double observed = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  double seconds = 0.0;
  bool all_pass() const;
};

// The full closed-form check suite.  `scale` shrinks sample sizes (grids and
// levels stay fixed) and is used by the determinism comparisons; statistical
// checks are only meaningful at scale 1.  Checks that hit an estimation floor
// report a failed row instead of throwing.
ValidationReport run_validation(std::uint64_t seed, int workers, double scale = 1.0);

// deterministic CSV rows (no timings), the byte-comparison payload
std::string validation_csv_body(const ValidationReport& report);

}  // namespace sojourn
