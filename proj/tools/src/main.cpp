#include <iostream>

#include "mttkit_tools/cli.hpp"

int main(int argc, char** argv) { return mttkit::cli::run(argc, argv, std::cout, std::cerr); }
