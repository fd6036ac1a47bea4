#include <vector>

#include "mvmr/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mvmr::run_cli(args);
}
