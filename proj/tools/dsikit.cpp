#include <iostream>
#include <string>
#include <vector>

#include "dsikit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dsikit::cli::run(args, std::cout, std::cerr);
}
