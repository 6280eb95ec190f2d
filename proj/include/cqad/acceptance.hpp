#pragma once

// The numbered acceptance criteria as a library, shared by the `selftest`
// subcommand and the standalone acceptance binary.

#include <cstdint>
#include <string>
#include <vector>

#include "cqad/engine.hpp"

namespace cqad::acceptance {

inline constexpr int kCriterionCount = 12;

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct Options {
  std::uint64_t seed = 20240611;
  std::vector<int> only;  ///< empty runs every criterion
};

/// Engine statistics shared across criteria within one suite run.
struct Context {
  Options options;
  EvolveStats engine_stats;
  int engine_runs = 0;
};

CriterionResult run_criterion(int id, Context& ctx);
std::vector<CriterionResult> run_all(const Options& options);

/// "[PASS] 3  title: detail" style line.
std::string format_line(const CriterionResult& r);

}  // namespace cqad::acceptance
