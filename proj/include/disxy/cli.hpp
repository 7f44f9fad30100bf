#pragma once

#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "disxy/config.hpp"

namespace disxy {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitRuntime = 3;

// Full command line: `disxy <subcommand> [--config PATH] [--out DIR]
// [--seed U64] [--threads N] [--reference]`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Runs one experiment into `dir`. Cells already present in `dir` from an
// interrupted run with the same config are reused. Returns an exit status.
int run_experiment(const ExperimentConfig& config, const std::filesystem::path& dir, std::ostream& log);

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Invariant self-tests behind `disxy validate`; a few seconds each.
const std::vector<std::string>& validation_suites();
SuiteResult run_suite(const std::string& name, std::uint64_t seed);

}  // namespace disxy
