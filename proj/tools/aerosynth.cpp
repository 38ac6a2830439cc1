#include <string>
#include <vector>

#include "aerosynth/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return aerosynth::cli::run(std::move(args));
}
