#pragma once

#include <stdexcept>
#include <string>

namespace sojourn {

// An estimate could not be formed: too few exceedances, degenerate
// denominator, and similar statistical floors.  Distinct from config /
// precondition errors so the CLI can map it to its own exit code.
class floor_error : public std::runtime_error {
 public:
  explicit floor_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sojourn
