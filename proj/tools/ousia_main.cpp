#include <string>
#include <vector>

#include "ousia/corpus.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ousia::run_cli(args);
}
