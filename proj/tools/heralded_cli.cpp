#include <string>
#include <vector>

#include "heralded/cli/app.hpp"

int main(int argc, char** argv) {
  return heralded::cli::run(std::vector<std::string>(argv, argv + argc));
}
