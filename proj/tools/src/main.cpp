// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "ringlink/cli/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ringlink::cli::run_app(args, std::cout, std::cerr);
}
