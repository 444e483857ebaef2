#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace magic_bullet::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "MAGIC_BULLET_OUTPUT_DIR";

enum class Command { kSpectra, kQuadrature, kPairs, kFig3, kFilters, kEprDemo };

std::string command_name(Command c);

/// Fully resolved, validated invocation. `params` holds every key of the command's
/// schema (flag value, else config-file value, else default) as text.
struct RunConfig {
  Command command = Command::kFig3;
  std::map<std::string, std::string> params;
  std::uint64_t seed = 0;
  std::string output_path;  // empty: environment directory or stdout
  bool with_oracle = false;

  double real(const std::string& key) const;
  long long integer(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<int> integers(const std::string& key) const;
  /// "lo:hi:n" -> (lo, hi, n)
  struct Grid {
    double lo;
    double hi;
    int n;
  };
  Grid grid(const std::string& key) const;
  bool has(const std::string& key) const;
};

/// Thrown by parse_config for --help; carries the rendered help text.
struct HelpRequested {
  std::string text;
};

/// Parses `command --key value ...` (no program name). A `--config FILE` flag, or
/// `config_text` when given, supplies flat `key = value` lines; flags win over the
/// file. Unknown keys, malformed values and out-of-range parameters raise
/// ValidationError naming the key.
RunConfig parse_config(const std::vector<std::string>& args,
                       const std::optional<std::string>& config_text = std::nullopt);

/// Flat `key = value` reader; '#' starts a comment. Throws ValidationError on malformed lines.
std::map<std::string, std::string> read_flat_config(const std::string& text);

/// Executes the command. Primary output goes to the resolved file, or to `out`
/// when there is none; scalar summaries (JSON) go to `info`. Returns 0 on success.
/// Module errors propagate as magic_bullet::Error (see exit_code_for).
int run(const RunConfig& config, std::ostream& out, std::ostream& info);

/// Where run() will write the primary output; empty means `out`.
std::string resolve_output_path(const RunConfig& config);

/// First CSV line: schema, version and the full resolved configuration.
std::string header_comment(const RunConfig& config, const std::vector<std::string>& columns);

}  // namespace magic_bullet::cli
