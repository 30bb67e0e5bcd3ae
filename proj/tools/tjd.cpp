#include <iostream>
#include <string>
#include <vector>

#include "tjd/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tjd::run_cli(args, std::cout, std::cerr);
}
