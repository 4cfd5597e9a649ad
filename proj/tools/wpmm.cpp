#include <iostream>

#include "wpmm/cli/commands.hpp"

int main(int argc, char** argv) { return wpmm::cli::run_cli(argc, argv, std::cout, std::cerr); }
