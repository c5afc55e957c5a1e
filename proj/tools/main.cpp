#include <iostream>

#include "stmtcls/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return stmtcls::run_subcommand(args, std::cout, std::cerr);
}
