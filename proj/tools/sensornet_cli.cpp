#include "sensornet/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return sensornet::run_cli(argc, argv, std::cout, std::cerr); }
