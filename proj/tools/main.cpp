#include <iostream>
#include <string>
#include <vector>

#include "platoonlab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return platoonlab::cli::run(std::move(args), std::cout, std::cerr);
}
