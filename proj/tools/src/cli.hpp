#pragma once

#include <iosfwd>

namespace rowlearn::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kFailure = 2;
inline constexpr int kBudget = 3;

/// Entry point for `rowlearn <learn|infer|experiment|simulate> ...`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rowlearn::cli
