#include "aim/cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return aim::cli::run(argc, argv, std::cout, std::cerr); }
