// Runs the numbered acceptance criteria, one PASS/FAIL line each.
// Usage: cqad_acceptance [--only N]... [--seed S]

#include <cstdlib>
#include <iostream>
#include <string>

#include "cqad/acceptance.hpp"

int main(int argc, char** argv) {
  cqad::acceptance::Options opt;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if ((a == "--only" || a == "--seed") && i + 1 < argc) {
      const std::string v = argv[++i];
      if (a == "--only") {
        opt.only.push_back(std::stoi(v));
      } else {
        opt.seed = std::stoull(v);
      }
    } else {
      std::cerr << "usage: cqad_acceptance [--only N]... [--seed S]\n";
      return 1;
    }
  }
  const auto results = cqad::acceptance::run_all(opt);
  int failed = 0;
  for (const auto& r : results) {
    std::cout << cqad::acceptance::format_line(r) << "\n";
    failed += r.passed ? 0 : 1;
  }
  std::cout << results.size() - static_cast<std::size_t>(failed) << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
