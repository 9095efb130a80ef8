#include <iostream>

#include "dnstab/cli/commands.hpp"

int main(int argc, char** argv) {
  return dnstab::cli::main_entry(argc, argv, std::cout, std::cerr);
}
