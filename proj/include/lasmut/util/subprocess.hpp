#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace lasmut::util {

struct CommandResult {
  int exit_code = -1;  // -1 when killed by a signal or timed out
  bool timed_out = false;
  double seconds = 0.0;
  std::string output;  // stdout and stderr interleaved
};

// Runs `command` through /bin/sh in its own process group. On timeout the
// whole group is killed. Throws IoError if the process cannot be started.
CommandResult run_command(const std::string& command, const std::filesystem::path& cwd,
                          std::optional<std::chrono::milliseconds> timeout = std::nullopt);

// Single-quotes `arg` for /bin/sh.
std::string shell_quote(std::string_view arg);

// Replaces every "{name}" in `tmpl` with `value`.
std::string substitute(std::string tmpl, std::string_view name, std::string_view value);

}  // namespace lasmut::util
