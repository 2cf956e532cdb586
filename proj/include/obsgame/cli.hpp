#pragma once

#include <ostream>

namespace obsgame {

// Exit codes: 0 success, 2 parse error or bad shape, 3 domain error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace obsgame
