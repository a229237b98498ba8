#include <iostream>

#include "trajadv/commands.hpp"

int main(int argc, char** argv) { return trajadv::cli_main(argc, argv, std::cout, std::cerr); }
