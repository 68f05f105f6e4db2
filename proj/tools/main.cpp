#include <iostream>

#include "tacsim/cli.hpp"

int main(int argc, char** argv) {
  return tacsim::run_cli(argc, argv, std::cout, std::cerr);
}
