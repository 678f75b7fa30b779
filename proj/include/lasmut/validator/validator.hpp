#pragma once
// Mutant confirmation: baseline green tests, patch, compile, re-run.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lasmut/frontend/method.hpp"
#include "lasmut/generator/filter.hpp"
#include "lasmut/util/error.hpp"
#include "lasmut/validator/harness.hpp"

namespace lasmut::validator {

class PatchConflict : public Error {
 public:
  using Error::Error;
};

struct Baseline {
  std::vector<std::string> green;  // sorted
  std::vector<std::string> flaky;
  std::vector<std::string> failing;
  std::map<std::string, double> seconds;  // per test, when the report has durations
  double suite_seconds = 0.0;
  std::vector<std::string> diagnostics;
};

void to_json(nlohmann::json& j, const Baseline& b);
void from_json(const nlohmann::json& j, Baseline& b);

// Builds a copy of the project under `workspace`, then runs the suite twice.
// Tests passing in only one run are flaky and excluded. Throws Error when the
// baseline build fails.
Baseline run_baseline(const std::filesystem::path& project, const HarnessConfig& harness,
                      const std::filesystem::path& workspace);

std::vector<std::string> baseline_green_tests(const std::filesystem::path& project, const HarnessConfig& harness,
                                              const std::filesystem::path& workspace);

enum class Verdict { syntactically_incorrect, killed, survived };

std::string_view verdict_name(Verdict v);
Verdict verdict_from_name(std::string_view name);

struct ValidationOutcome {
  std::string mutant_id;
  bool compile_ok = false;
  std::vector<std::string> green_tests_before;
  std::vector<std::string> failing_after;
  std::vector<std::string> timed_out;  // subset of failing_after
  Verdict verdict = Verdict::syntactically_incorrect;
  double wall_time = 0.0;  // seconds

  // killed <=> compile_ok and failing_after non-empty; survived <=> compile_ok
  // and failing_after empty; failing_after is a subset of green_tests_before.
  bool consistent() const;
};

void to_json(nlohmann::json& j, const ValidationOutcome& o);
void from_json(const nlohmann::json& j, ValidationOutcome& o);

// Replaces `original`'s declaration in `source` with `mutant_text`. Throws
// PatchConflict when the method is missing or its body changed.
std::string patch_source(const std::string& source, const frontend::MethodRecord& original,
                         const std::string& mutant_text, std::string_view language = "java");

struct ValidateOptions {
  std::filesystem::path workspace_root;  // one fresh directory per mutant below it
  bool keep_workspace = false;
  std::string language = "java";
};

// Validates an accepted mutant of `original` against the baseline's green
// tests. Throws PatchConflict, or Error when the harness crashes twice.
ValidationOutcome validate_mutant(const std::filesystem::path& project, const frontend::MethodRecord& original,
                                  const generator::MutantCandidate& mutant, const Baseline& baseline,
                                  const HarnessConfig& harness, const ValidateOptions& options);

}  // namespace lasmut::validator
