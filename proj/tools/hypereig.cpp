#include <iostream>
#include <string>
#include <vector>

#include "hypereig/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return hypereig::cli::run(args, std::cout, std::cerr);
}
