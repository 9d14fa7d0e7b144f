#include <iostream>
#include <string>
#include <vector>

#include "jchsim/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return jch::run_cli(args, std::cout, std::cerr);
}
