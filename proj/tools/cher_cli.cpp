#include <iostream>

#include "cher/cli.hpp"

int main(int argc, char** argv) { return cher::cli::dispatch(argc, argv, std::cout, std::cerr); }
