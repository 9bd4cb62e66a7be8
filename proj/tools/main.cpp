// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The crowdmatch Authors.

#include <iostream>

#include "crowdmatch/cli.hpp"

int main(int argc, char** argv) {
  return crowdmatch::run_cli(argc, argv, std::cout, std::cerr);
}
