#pragma once

#include <iosfwd>

namespace fmmde {

/// Entry point of the `fmmde` command. Returns 0 on success, 1 on numeric or
/// runtime failure, 2 on configuration or input errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fmmde
