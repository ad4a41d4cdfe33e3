#pragma once

#include <ostream>

namespace pcnet {

// Command-line entry point. Exit codes: 0 success, 1 domain error
// (invalid net, impossible evidence, invalid cover), 2 usage or parse error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pcnet
