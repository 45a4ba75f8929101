#include "edgeshap/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return edgeshap::cli::run(argc, argv, std::cout, std::cerr); }
