#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace platoonlab::cli {

/// Runs one subcommand (analyze, bounds, synthesize, nnir, simulate,
/// table3). Returns 0 on success, 2 when an analysis verdict is negative,
/// 1 on usage or input errors. Streams make the front end testable.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace platoonlab::cli
