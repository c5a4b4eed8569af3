#include <iostream>
#include <string>
#include <vector>

#include "xxchain/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return xxchain::cli::run(args, std::cout, std::cerr);
}
