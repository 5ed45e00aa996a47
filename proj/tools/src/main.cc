#include <iostream>

#include "attrinfer/tools/cli.h"

int main(int argc, char** argv) {
  return attrinfer::tools::RunCli(argc, argv, std::cout, std::cerr);
}
