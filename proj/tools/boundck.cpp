#include <iostream>

#include "boundck/cli.hpp"

int main(int argc, char** argv) { return boundck::run_cli(argc, argv, std::cout, std::cerr); }
