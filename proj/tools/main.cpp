// Copyright 2026 The RLSP Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "rlsp/parallel.hpp"

int main(int argc, char** argv) {
  rlsp::retain_heap_memory();
  std::vector<std::string> args(argv + 1, argv + argc);
  return rlsp::cli::run(args, std::cout, std::cerr);
}
