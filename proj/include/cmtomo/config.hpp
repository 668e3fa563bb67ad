#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cmtomo/reconstruct.hpp"
#include "cmtomo/states.hpp"

namespace cmtomo {

/// Resolved experiment configuration. Defaults reproduce the standard scans.
struct ExperimentConfig {
  // [system]
  std::vector<ModeSpec> modes;
  double hbar = 1.0;
  // [frame]; a single mu/nu value applies to every mode
  std::vector<double> mu{1.0};
  std::vector<double> nu{0.0};
  double r = 0.5;
  double R = 2.0;
  // [grid]; 0 means "use the grid policy"
  double dx = 0.0;
  double half_width = 0.0;
  std::size_t max_points = std::size_t{1} << 22;
  // [scan]
  double energy = 10.0;
  std::vector<int> N_list{4, 8, 16, 32, 64};
  std::vector<double> hbar_list{1.0, 0.1, 0.01, 0.001};
  double epsilon = 0.1;
  std::size_t samples = 1000000;
  // [reconstruct]
  int dim = 8;
  ReconstructOptions reconstruct;
  // [run]
  std::uint64_t seed = 0;
  std::string output;

  SystemSpec system() const;
  /// Frame for `count` modes, broadcasting single mu/nu values.
  FrameSpec frame(std::size_t count) const;
  /// One key = value line per field in a fixed order, 17 significant digits.
  std::string canonical() const;
  /// 16 hex digits of FNV-1a over canonical().
  std::string digest() const;
};

/// Parses the config text. Throws ConfigError("<source>:<line>: <key>: message")
/// for syntax errors, unknown keys, bad values and invariant violations.
ExperimentConfig parse_config(std::string_view text, std::string_view source = "config");
ExperimentConfig load_config(const std::string& path);

/// Locale-independent shortest-round-trip-safe formatting at 17 significant digits.
std::string format_real(double v);

}  // namespace cmtomo
