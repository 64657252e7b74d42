#include <iostream>
#include <string>
#include <vector>

#include "repnet/pipeline.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return repnet::run_cli(args, std::cout, std::cerr);
}
