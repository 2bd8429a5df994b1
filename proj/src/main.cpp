#include <iostream>
#include <string>
#include <vector>

#include "gtt/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gtt::cli_main(args, std::cout, std::cerr);
}
