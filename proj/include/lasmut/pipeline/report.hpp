#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lasmut/pipeline/pipeline.hpp"

namespace lasmut::pipeline {

struct Funnel {
  std::size_t generated = 0;
  std::size_t parseable = 0;
  std::size_t accepted = 0;
  std::size_t compiled = 0;
  std::size_t killed = 0;
};

struct PhaseStats {
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
  double p95 = 0.0;  // nearest rank
};

PhaseStats phase_stats(std::vector<double> millis);

struct RunReport {
  Funnel funnel;
  std::map<std::string, PhaseStats> phases;  // every phase in kPhases
  nlohmann::json table;                      // null without a metrics stage
};

// Reads the artifacts of a run directory (or of the directory holding a
// manifest.json). Missing stages count as empty.
RunReport build_report(const std::filesystem::path& run_dir_or_manifest);

std::string render_report(const RunReport& report);

void to_json(nlohmann::json& j, const RunReport& r);

}  // namespace lasmut::pipeline
