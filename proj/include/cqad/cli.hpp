#pragma once

#include <string>

namespace cqad::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kNumerical = 2 };

struct RunManifest {
  std::string subcommand;
  std::string config_path;
  std::string output_dir;
  long long seed = 0;
  std::string tool_version;
  double wall_time = 0.0;  ///< seconds
  int exit_code = 0;
  std::string error;
};

std::string manifest_json(const RunManifest& m);

/// Entry point of the `cqad` executable.
int run(int argc, char** argv);

}  // namespace cqad::cli
