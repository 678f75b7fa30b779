#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lasmut/generator/llm.hpp"
#include "lasmut/validator/harness.hpp"

namespace lasmut::pipeline {

// Another mutant dataset to measure overlap against: JSONL records with
// method_key (original method id), mutant_id and text.
struct CompareDataset {
  std::string id;
  std::filesystem::path path;
};

struct RunConfig {
  std::filesystem::path project_root;
  std::string language = "java";
  std::string model_id = "synthetic-v1";
  std::string attention = "synthetic";  // synthetic | dir:<path> | cmd:<command>
  int k = 10;
  int n_bugs = 3;
  std::string prompt_template = "las-v1";
  std::size_t context_budget = 4096;
  generator::ProviderConfig provider;
  std::optional<std::filesystem::path> harness_path;
  bool skip_validation = false;
  std::filesystem::path output_dir = "runs";
  std::uint64_t seed = 0;
  int workers = 1;
  std::vector<CompareDataset> compare;

  // Throws ConfigError.
  void validate() const;
  // First 8 hex digits of SHA-256 over the canonical JSON of every field that
  // affects results (output_dir and workers excluded).
  std::string hash() const;
};

void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

// Relative paths in the file resolve against its directory. Throws ConfigError.
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace lasmut::pipeline
