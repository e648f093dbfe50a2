#include <iostream>
#include <string>
#include <vector>

#include "ss/session.hpp"

int main(int argc, char* argv[]) {
  std::ios::sync_with_stdio(false);
  std::vector<std::string> files(argv + 1, argv + argc);
  return ss::run(files, std::cin, std::cout, std::cerr);
}
