#include <iostream>

#include "fare/cli/commands.hpp"

int main(int argc, char** argv) {
  return fare::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
