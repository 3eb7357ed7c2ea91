#include <iostream>
#include <string>
#include <vector>

#include "swarmengage/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return swarmengage::run_cli(args, std::cout, std::cerr);
}
