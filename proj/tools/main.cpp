#include <iostream>
#include <string>
#include <vector>

#include "renyi_reach/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return renyi_reach::cli::run(args, std::cout, std::cerr);
}
