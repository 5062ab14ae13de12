#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qfslice/moebius.hpp"

namespace qfslice::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDomain = 2;

/// Runs one subcommand. `args` excludes the program name.
/// Returns 0 on success, 1 on a usage error, 2 on a numeric-domain error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "re,im" or "re" into a complex number.
Complex parse_complex(const std::string& text);

} // namespace qfslice::cli
