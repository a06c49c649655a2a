#include <iostream>

#include "rhomap/cli.hpp"

int main(int argc, char** argv) {
  return rhomap::run_cli(argc, argv, std::cout, std::cerr);
}
