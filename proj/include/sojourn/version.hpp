#pragma once

namespace sojourn {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sojourn
