#include "petrovitch/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  auto env = petrovitch::cli::dispatch(args);
  return petrovitch::cli::emit(env, std::cout, std::cerr);
}
