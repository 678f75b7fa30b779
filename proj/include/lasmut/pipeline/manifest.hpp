#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace lasmut::pipeline {

struct ArtifactEntry {
  std::string path;  // relative to the run directory, '/' separated
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct StageEntry {
  std::string name;
  std::string status;  // completed | skipped | not_run
};

// Index of a run's deterministic artifacts. Wall-clock data (timings, run
// info) is referenced but never hashed, so identical runs give identical
// manifests.
struct RunManifest {
  std::string config_hash;
  std::vector<StageEntry> stages;
  std::vector<ArtifactEntry> artifacts;  // sorted by path
  std::vector<std::string> unhashed;

  // Paths whose current content no longer matches; empty when all verify.
  std::vector<std::string> verify(const std::filesystem::path& run_dir) const;
};

ArtifactEntry hash_artifact(const std::filesystem::path& run_dir, const std::string& rel_path);

void to_json(nlohmann::json& j, const RunManifest& m);
void from_json(const nlohmann::json& j, RunManifest& m);

RunManifest read_manifest(const std::filesystem::path& path);

}  // namespace lasmut::pipeline
