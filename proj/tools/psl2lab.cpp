#include <iostream>

#include "psl2lab/cli.hpp"

int main(int argc, char** argv) { return psl2lab::cli::cli_dispatch(argc, argv, std::cout, std::cerr); }
