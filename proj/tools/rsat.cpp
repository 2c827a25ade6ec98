#include <iostream>

#include "rsat/cli.hpp"

int main(int argc, char **argv) {
  return rsat::cli_main(argc, argv, std::cin, std::cout, std::cerr);
}
