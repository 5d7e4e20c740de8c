#include <iostream>
#include <string>
#include <vector>

#include "stackres_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return stackres::cli::run(args, std::cout, std::cerr);
}
