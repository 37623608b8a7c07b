#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace pairtime::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitVerification = 2;

/// Entry point shared by the executable and the tests. argv[0] is the
/// program name. Output goes to out/err instead of the process streams so
/// callers can capture it.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

} // namespace pairtime::cli
