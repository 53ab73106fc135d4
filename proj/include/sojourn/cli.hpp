#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sojourn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFloor = 2;
inline constexpr int kExitValidation = 3;

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace sojourn::cli
