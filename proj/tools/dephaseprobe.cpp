#include <iostream>

#include "dephaseprobe/cli.hpp"

int main(int argc, char** argv) {
  return dephaseprobe::cli::main_entry(argc, argv, std::cout, std::cerr);
}
