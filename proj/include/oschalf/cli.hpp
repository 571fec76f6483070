#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace oschalf {

inline constexpr int kExitPass = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitCheckFailed = 2;

struct RunConfig {
  std::string command;
  int dim = 2;
  int max_degree = 16;
  /// 0 selects 2K+8.
  int order = 0;
  double power = 3.0;
  /// Set selects the critical-plus nonlinearity.
  std::optional<double> lambda;
  /// Defaults: 2 for critical-plus solves, 3 for bubble fits.
  std::optional<double> q;
  std::optional<double> theta;
  std::uint64_t seed = 1;
  double tol_grad = 1e-8;
  double inner_radius = 3.0;
  std::string out;
  std::string format = "json";
};

/// Executes one command and writes its artifacts. Returns kExitPass when
/// every asserted check holds and kExitCheckFailed otherwise. Throws
/// std::invalid_argument for inconsistent settings and IoError when an
/// artifact cannot be written.
int run(const RunConfig& config);

/// Parses flags (and an optional --config file, overridden by flags), runs
/// the command and maps errors onto exit codes.
int main_entry(int argc, char** argv);

}  // namespace oschalf
