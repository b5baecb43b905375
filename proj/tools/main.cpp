#include <iostream>

#include "mdgi_cli/cli.hpp"

int main(int argc, char** argv) { return mdgi::cli::run(argc, argv, std::cout, std::cerr); }
