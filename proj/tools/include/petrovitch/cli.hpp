#pragma once

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace petrovitch::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kComputationError = 2, kChecksFailed = 3 };

enum class Format { Json, Csv, Text };

struct CommandSpec {
  std::string name;
  /// Resolved flag values after config and environment defaults.
  nlohmann::json args = nlohmann::json::object();
  unsigned precision_bits = 256;
  std::optional<std::string> output_path;
  Format format = Format::Json;
};

struct SideFile {
  std::string path;
  std::string content;
};

struct ReportEnvelope {
  CommandSpec spec;
  /// {tool_version, command, wall_time_ms, payload, checks}; null for usage errors.
  nlohmann::json json;
  int exit_code = kOk;
  /// Help or usage text; non-empty only when parsing stopped early.
  std::string usage;
  /// Primary CSV payload (theta-eval samples, iterate trace), if any.
  std::optional<std::string> csv;
  std::vector<SideFile> side_files;
};

std::string tool_version();

/// Parses argv (without the program name) and runs exactly one command.
ReportEnvelope dispatch(const std::vector<std::string>& argv);

/// Writes the envelope (or CSV for --format csv) to `out` or --output, side
/// files to their paths, usage text to `err`. Returns the process exit code;
/// an unwritable path yields kComputationError.
int emit(const ReportEnvelope& env, std::ostream& out, std::ostream& err);

/// key = value lines; '#' starts a comment. Recognized keys: precision_bits,
/// cache_dir, digits.
struct Config {
  std::optional<unsigned> precision_bits;
  std::optional<std::string> cache_dir;
  std::optional<int> digits;
};

Config parse_config(const std::string& text);
Config load_config(const std::string& path);

/// JSON documents in a directory, written under a lock file so concurrent
/// runs never interleave writes.
class ResultCache {
 public:
  explicit ResultCache(std::optional<std::string> dir) : dir_(std::move(dir)) {}

  bool enabled() const { return dir_.has_value(); }
  std::optional<nlohmann::json> load(const std::string& name) const;
  /// Returns false when the lock could not be taken or the write failed; the
  /// caller continues without caching.
  bool store(const std::string& name, const nlohmann::json& doc) const;

 private:
  std::optional<std::string> dir_;
};

}  // namespace petrovitch::cli
