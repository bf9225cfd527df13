// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "rydsim/cli.hpp"

int main(int argc, char** argv) { return ryd::cli::main_entry(argc, argv, std::cout, std::cerr); }
