#include <iostream>
#include <string>
#include <vector>

#include "hapticbar/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return hapticbar::cli::run(args, std::cout, std::cerr);
}
