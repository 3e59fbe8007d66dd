#include <iostream>
#include <string>
#include <vector>

#include "measures/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return measures::cli::run(args, std::cout, std::cerr);
}
