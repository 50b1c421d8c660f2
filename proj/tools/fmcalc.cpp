#include <iostream>
#include <string>
#include <vector>

#include "fmcalc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fmcalc::run_cli(args, std::cout, std::cerr);
}
