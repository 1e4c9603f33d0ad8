#pragma once

// Subcommand execution: each command writes plot-ready CSV files and a
// manifest.json into the output directory.
//
// CSV formatting is byte-deterministic: 12 significant digits, '.' decimal
// separator, '\n' line endings, booleans as true/false.

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "infoverload/config.hpp"

namespace infoverload {

inline constexpr std::string_view kToolName = "infoverload";
inline constexpr std::string_view kToolVersion = "1.0.0";

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kConfig = 2;
inline constexpr int kNumeric = 3;
inline constexpr int kConjectureFailed = 4;
inline constexpr int kUsage = 64;
inline constexpr int kConfigSyntax = 65;
inline constexpr int kConfigMissing = 66;
}  // namespace exit_code

/// Names accepted by run_command.
std::span<const std::string_view> command_names() noexcept;

struct CommandResult {
  int exit_code = exit_code::kOk;
  std::vector<std::string> files;  // relative to the output directory
  std::string summary;             // one human-readable line per verdict or result
};

/// Runs `name` and writes its outputs plus manifest.json into `out_dir`.
/// Library errors propagate; use exit_code_for to map them.
CommandResult run_command(std::string_view name, const RunConfig& config,
                          const std::filesystem::path& out_dir);

/// Exit code for an exception thrown while parsing or running.
int exit_code_for(const std::exception& error) noexcept;

/// One-line JSON error record: {"error": kind, "field": ..., "message": ..., "exit_code": n}.
std::string error_record(const std::exception& error);

/// %.12g formatting via std::to_chars (locale independent).
std::string format_number(double value);

}  // namespace infoverload
