#ifndef HYBRID_CLI_RUNNER_HPP
#define HYBRID_CLI_RUNNER_HPP

#include <iostream>
#include <string>
#include <vector>

namespace hybrid::cli {

// Exit codes: 0 ok, 2 config error, 3 physics precondition, 4 instability,
// 5 truncation, 1 unexpected failure.
int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
        std::ostream& err = std::cerr);

}  // namespace hybrid::cli

#endif
