#include <iostream>
#include <string>
#include <vector>

#include "eisen/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return eisen::cli::run_cli(args, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "eisen: " << e.what() << "\n";
    return eisen::cli::kCheckFailure;
  }
}
