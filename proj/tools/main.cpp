#include <iostream>
#include <string>
#include <vector>

#include "distill/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return distill::cli::run(args, std::cout, std::cerr);
}
