#include <iostream>

#include "obsgame/cli.hpp"

int main(int argc, char** argv) { return obsgame::run_cli(argc, argv, std::cout, std::cerr); }
