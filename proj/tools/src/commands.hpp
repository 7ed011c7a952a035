#pragma once

#include <filesystem>
#include <optional>
#include <string>

namespace grushin::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kConfigError = 1, kSolverError = 2 };

struct SolveArgs {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;
  bool allow_nonadmissible = false;
};

struct SweepArgs {
  std::filesystem::path config;
  std::string param;
  double from = 0.0, to = 0.0;
  int steps = 0;
};

struct VerifyArgs {
  std::filesystem::path field, config;
};

struct KernelArgs {
  std::filesystem::path config, out;
};

struct ProfileArgs {
  std::filesystem::path config;
  double tmax = 0.0;
  int steps = 0;
};

int cmd_solve(const SolveArgs& args);
int cmd_sweep(const SweepArgs& args);
int cmd_verify(const VerifyArgs& args);
int cmd_kernel(const KernelArgs& args);
int cmd_profile(const ProfileArgs& args);

}  // namespace grushin::cli
