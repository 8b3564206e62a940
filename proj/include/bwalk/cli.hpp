#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bwalk/ensemble.hpp"

namespace bwalk::cli {

enum ExitCode : int { Ok = 0, Usage = 1, Numerical = 2, AcceptanceFailure = 3 };

enum class Format { Csv, Json };

/// Flat run configuration shared by every subcommand. Unset optionals take
/// subcommand-specific defaults.
struct RunConfig {
  std::string subcommand;
  std::string family = "realsym";
  int n = 20;
  int m = 0;  // rect only; 0 means N/2
  std::optional<std::uint64_t> seed;
  std::uint64_t walkers = 5;
  double eta_max = 6.0;
  std::optional<std::uint64_t> steps;
  std::uint64_t stride = 0;  // 0: d_N / 10
  double c = 0.5;
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> dt;
  std::uint64_t draws = 0;
  int bins = 50;
  unsigned workers = 1;
  bool exact = false;  // oracle: exact rational mode
  bool higher = false;
  std::uint64_t bursts_per_anchor = 0;  // moments: 0 keeps one anchor
  std::filesystem::path out = "out";
  Format format = Format::Csv;

  EnsembleKind kind() const;
  /// Hash of every field that can change output bytes (not out, workers).
  std::string hash() const;
  /// Throws ConfigError for invalid combinations.
  void validate() const;
};

int cmd_hamming(const RunConfig& cfg);
int cmd_spectra(const RunConfig& cfg);
int cmd_moments(const RunConfig& cfg);
int cmd_oracle(const RunConfig& cfg);
int cmd_stationary(const RunConfig& cfg);

/// Parses argv (with an optional --config key=value file), dispatches and
/// maps exceptions to exit codes.
int main(int argc, char** argv);

}  // namespace bwalk::cli
