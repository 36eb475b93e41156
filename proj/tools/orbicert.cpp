#include <iostream>

#include "orbicert/cli.hpp"

int main(int argc, char** argv) {
  return orbicert::run_cli(argc, argv, std::cout, std::cerr);
}
