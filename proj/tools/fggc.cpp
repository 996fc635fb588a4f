#include <iostream>
#include <string>
#include <vector>

#include "fgg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fgg::dispatch(args, std::cout, std::cerr);
}
