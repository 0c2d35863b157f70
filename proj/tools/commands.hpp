#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace urlweaver::cli {

enum class EmitFormat { Json, Csv, Both };

struct RunConfig {
  std::vector<std::filesystem::path> inputs;  // SIR files, or logs for dynstats
  std::vector<std::filesystem::path> logs;    // dynamic side of compare
  std::optional<std::filesystem::path> ads;
  std::size_t cap = 10'000;
  bool loop_once_exact = false;
  bool holes_may_be_empty = false;
  std::filesystem::path out_dir = "urlweaver-out";
  EmitFormat format = EmitFormat::Both;
  std::size_t jobs = 1;
  std::size_t top = 10;

  bool emit_json() const { return format != EmitFormat::Csv; }
  bool emit_csv() const { return format != EmitFormat::Json; }
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws ConfigError: no inputs, cap < 1 or jobs < 1.
void validate(const RunConfig& config);

/// $URLWEAVER_OUT when set, else "urlweaver-out".
std::filesystem::path default_out_dir();

/// Name of the application a SIR file or log belongs to (its file stem).
std::string unit_name(const std::filesystem::path& file);

/// Each command writes its exports under config.out_dir and returns the
/// process exit code: 0 unless a fatal error occurred. Per-file failures are
/// reported on `log` and in the exports, and the file is skipped.
int cmd_analyze(const RunConfig& config, std::ostream& log);
int cmd_constants(const RunConfig& config, std::ostream& log);
int cmd_dynstats(const RunConfig& config, std::ostream& log);
int cmd_compare(const RunConfig& config, std::ostream& log);
int cmd_macro(const RunConfig& config, std::ostream& log);

}  // namespace urlweaver::cli
