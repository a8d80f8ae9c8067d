// SPDX-License-Identifier: Apache-2.0
#include <unistd.h>

#include <cstdlib>
#include <iostream>

#include "unioffload/cli.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  bool color = isatty(STDERR_FILENO) && std::getenv("NO_COLOR") == nullptr;
  return unioffload::cli::run({argv, argv + argc}, std::cout, std::cerr, std::cin, color);
}
