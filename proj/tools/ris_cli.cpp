// SPDX-License-Identifier: Apache-2.0
#include "ris/cli_runner.hpp"

int main(int argc, char** argv) { return ris::cli::main(argc, argv); }
