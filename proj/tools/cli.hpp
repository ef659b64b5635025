#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sizer::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // I/O trouble writing outputs
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitAllInfeasible = 3;

// Entry point shared by the `sizer` binary and the tests. args[0] is the
// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// FNV-1a 64 over the text, as 16 lowercase hex digits.
std::string content_digest(const std::string& text);

// ISO-8601 UTC from SOURCE_DATE_EPOCH, or the epoch itself when unset, so
// batch outputs are reproducible.
std::string reproducible_timestamp();

}  // namespace sizer::cli
