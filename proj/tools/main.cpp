#include <iostream>
#include <string>
#include <vector>

#include "carve3d/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return carve3d::cli::run(args, std::cout, std::cerr);
}
