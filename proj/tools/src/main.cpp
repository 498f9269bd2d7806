#include <iostream>

#include "gmr/cli/commands.hpp"

int main(int argc, char** argv) {
  return gmr::cli::run_cli(argc, argv, std::cout, std::cerr);
}
