#pragma once
// Command-template test harness: build and test commands plus a result parser.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace lasmut::validator {

enum class ReportFormat { junit_xml, tap, exitcode };

std::string_view report_format_name(ReportFormat f);
ReportFormat report_format_from_name(std::string_view name);

struct HarnessConfig {
  std::string build_cmd;         // empty: no separate build step
  std::string test_cmd;
  std::string test_filter_flag;  // appended with one quoted test id; empty: run the whole suite
  ReportFormat report_format = ReportFormat::exitcode;
  std::string report_glob;       // relative to the project; empty: parse the command output
  double build_timeout_seconds = 600;
  double timeout_factor = 5.0;        // test timeout = factor x baseline duration
  double min_timeout_seconds = 1.0;
  std::optional<std::filesystem::path> covered_methods;  // JSON list or one id per line
};

// Reads a JSON harness file; relative covered_methods paths resolve against
// the file's directory. Throws ConfigError.
HarnessConfig load_harness(const std::filesystem::path& path);

void to_json(nlohmann::json& j, const HarnessConfig& h);
void from_json(const nlohmann::json& j, HarnessConfig& h);

enum class TestStatus { passed, failed, skipped };

struct TestResult {
  std::string id;
  TestStatus status = TestStatus::passed;
  std::optional<double> seconds;
};

std::vector<TestResult> parse_junit_xml(const std::string& xml);
std::vector<TestResult> parse_tap(const std::string& tap);

struct TestRun {
  bool timed_out = false;
  int exit_code = 0;
  double seconds = 0.0;
  std::vector<TestResult> results;
  std::string output;
};

// Runs the test command (optionally filtered to one test) in `dir` and parses
// its results. Stale report files are removed first.
TestRun run_tests(const HarnessConfig& h, const std::filesystem::path& dir,
                  const std::optional<std::string>& only_test = std::nullopt,
                  std::optional<double> timeout_seconds = std::nullopt);

std::vector<std::string> read_covered_methods(const std::filesystem::path& path);

}  // namespace lasmut::validator
