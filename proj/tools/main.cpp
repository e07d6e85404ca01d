#include <iostream>
#include <string>
#include <vector>

#include "dualopa/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return dualopa::cli::run(args, std::cout, std::cerr);
}
