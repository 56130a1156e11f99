#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace isocurve::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitBudget = 3;
inline constexpr int kExitNonempty = 10;  // filter/batch: some final set is nonempty

/// Runs one command line (args[0] is the program name). Output goes to
/// `out` unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Bundled data file used when --gens-file is absent.
std::string default_data_file();

}  // namespace isocurve::cli
