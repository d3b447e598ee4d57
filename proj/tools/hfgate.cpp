#include <iostream>

#include "hfgate/cli.hpp"

int main(int argc, char** argv) { return hfgate::cli::run(argc, argv, std::cout, std::cerr); }
