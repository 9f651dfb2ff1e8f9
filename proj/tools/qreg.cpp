#include <iostream>
#include <string>
#include <vector>

#include "qreg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return qreg::cli::run(args, std::cout, std::cerr);
}
