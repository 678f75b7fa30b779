#pragma once
// End-to-end run: extract -> attention -> analyze -> generate -> validate -> metrics.
//
// Every stage reads the previous stages' files from the run directory and
// records what it wrote in stages/<name>.done together with a hash of its
// inputs. A rerun skips every stage whose input hash and outputs still match.

#include <array>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lasmut/pipeline/config.hpp"
#include "lasmut/pipeline/manifest.hpp"

namespace lasmut::pipeline {

enum class Stage { extract, attention, analyze, generate, validate, metrics };

inline constexpr std::array<Stage, 6> kStages{Stage::extract,  Stage::attention, Stage::analyze,
                                              Stage::generate, Stage::validate,  Stage::metrics};

std::string_view stage_name(Stage s);
Stage stage_from_name(std::string_view name);

inline constexpr const char* kPhases[] = {"attention_analysis", "prompting", "end_to_end_generation", "validation"};

struct TimingRecord {
  std::string phase;
  std::string method_id;  // mutant id for the validation phase
  double millis = 0.0;
};

void to_json(nlohmann::json& j, const TimingRecord& t);
void from_json(const nlohmann::json& j, TimingRecord& t);

struct RunOptions {
  std::optional<std::filesystem::path> run_dir;  // explicit run directory
  bool resume = false;                           // reuse the newest run with the same config hash
  std::optional<Stage> stop_after;
  std::function<void(const std::string&)> log;
};

struct RunResult {
  std::filesystem::path run_dir;
  RunManifest manifest;
  std::vector<std::string> executed;
  std::vector<std::string> reused;
};

// Throws ConfigError for an invalid config; a failing stage throws after the
// stages before it have been checkpointed.
RunResult run(const RunConfig& config, const RunOptions& options = {});

// Run directory name: <UTC timestamp>-<config hash>.
std::string run_dir_name(const RunConfig& config);

}  // namespace lasmut::pipeline
