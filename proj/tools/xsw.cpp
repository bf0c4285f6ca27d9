#include <iostream>

#include "xsw/cli/commands.hpp"

int main(int argc, char** argv) { return xsw::cli::main_entry(argc, argv, std::cout, std::cerr); }
