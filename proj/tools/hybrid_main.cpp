#include "hybrid/cli_runner.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hybrid::cli::run(args);
}
