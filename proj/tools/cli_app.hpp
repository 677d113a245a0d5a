#pragma once

#include <iosfwd>

namespace poswalk::cli {

// Parses one command line and runs the requested subcommand, writing any
// artifacts to disk, a human-readable summary to `out`, and problems to
// `err`. Returns the process exit code: 0 when every check passed, 1 when
// a check failed, 2 on usage or configuration errors, 3 when a numerical
// guard tripped.
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace poswalk::cli
