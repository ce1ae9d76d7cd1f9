#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pdmn {

/// `pdmn check|emit|run <file> [options]`. `args` excludes the program name.
/// Returns the process exit code: 0 ok, 1 validation errors, 2 parse or usage
/// errors, 3 engine errors.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace pdmn
