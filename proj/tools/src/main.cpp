#include <iostream>

#include "e2neg_cli/commands.hpp"

int main(int argc, char** argv) { return e2neg::cli::run_cli(argc, argv, std::cout, std::cerr); }
