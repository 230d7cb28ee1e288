#include <iostream>
#include <string>
#include <vector>

#include "kgframe/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const auto result = kgframe::cli::run(args, kgframe::cli::tolerance_env());
  std::cout << result.out;
  std::cerr << result.err;
  return result.exit_code;
}
