// Copyright 2026 The anomset Authors
// SPDX-License-Identifier: Apache-2.0

#include <string>
#include <vector>

#include "anomset/cli.hpp"

int main(int argc, char** argv) {
  return anomset::cli::run(std::vector<std::string>(argv, argv + argc));
}
