#include "cqad/cli.hpp"

int main(int argc, char** argv) {
  return cqad::cli::run(argc, argv);
}
