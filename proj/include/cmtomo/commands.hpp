#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "cmtomo/config.hpp"

namespace cmtomo {

inline constexpr const char* artifact_version = "0.1.0";

struct RunOptions {
  std::string config_path;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> epsilon;
  bool all_backends = false;
};

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_numerical = 3 };

// Each renderer returns the complete output file. Flags already folded into
// the config (seed, epsilon) are part of the recorded digest.
std::string cmd_marginal(const ExperimentConfig& config);
std::string cmd_cm(const ExperimentConfig& config, bool all_backends);
std::string cmd_clt_scan(const ExperimentConfig& config);
std::string cmd_hbar_scan(const ExperimentConfig& config);
std::string cmd_reconstruct(const ExperimentConfig& config);
std::string cmd_discrepancy_report(const ExperimentConfig& config);

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::string& path, const std::string& content);

/// Loads the config, applies flag overrides, renders, writes. Errors go to
/// `err` and map to exit codes 2 (config) and 3 (numerical).
int run_command(const std::string& command, const RunOptions& options, std::ostream& out, std::ostream& err);

}  // namespace cmtomo
