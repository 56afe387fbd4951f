#pragma once

#include <ostream>

namespace qmorse {

// Exit codes: 0 ok, 2 parse or usage error, 3 domain error, 4 resource limit.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qmorse
