#include <iostream>
#include <string>
#include <vector>

#include "isocurve/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return isocurve::cli::run(args, std::cout, std::cerr);
}
