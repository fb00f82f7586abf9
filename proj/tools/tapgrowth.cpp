#include "tapgrowth/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return tapgrowth::run_cli(argc, argv, std::cout, std::cerr); }
