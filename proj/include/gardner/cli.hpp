#pragma once

#include <iosfwd>

namespace gardner {

// Exit codes: 0 all checks pass, 1 a verification failed, 2 input or parse error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gardner
