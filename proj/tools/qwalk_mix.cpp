#include <iostream>

#include "qwalk/cli.hpp"

int main(int argc, char** argv) {
  return qwalk::run_cli(argc, argv, std::cout, std::cerr);
}
