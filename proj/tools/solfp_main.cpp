// SPDX-License-Identifier: Apache-2.0

#include <unistd.h>

#include <iostream>

#include "solfp/cli.hpp"

int main(int argc, char** argv) {
  return solfp::run_cli(argc, argv, std::cin, std::cout, std::cerr, isatty(STDIN_FILENO) != 0);
}
