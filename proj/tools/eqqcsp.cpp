#include <iostream>

#include "eqqcsp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return eqqcsp::cli::run(args, std::cout, std::cerr);
}
