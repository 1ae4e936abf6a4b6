#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cubespline/spline.hpp"

namespace cubespline::cli {

/// "natural", or a number; numbers above 0.99e30 also mean natural.
BoundaryCondition parse_boundary(const std::string& text);

/// Flag value, else CUBESPLINE_SEED, else a fixed default.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag);

/// Runs one invocation. `args` excludes the program name. Returns the exit
/// code: 0 success, 1 runtime failure, 2 invalid input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cubespline::cli
