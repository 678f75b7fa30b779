#pragma once
// Where attention bundles come from.

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "lasmut/attention/bundle.hpp"
#include "lasmut/attention/synthetic_model.hpp"
#include "lasmut/frontend/method.hpp"

namespace lasmut::attention {

class AttentionSource {
 public:
  virtual ~AttentionSource() = default;
  virtual std::string describe() const = 0;
  // Validated attention for `method` (id and text()), or nullopt when none is
  // available yet. Throws ShapeError on a malformed dump.
  virtual std::optional<AttentionBundle> lookup(const frontend::MethodRecord& method) const = 0;
};

class SyntheticSource : public AttentionSource {
 public:
  explicit SyntheticSource(SyntheticModelOptions options = {}) : options_(std::move(options)) {}
  std::string describe() const override;
  std::optional<AttentionBundle> lookup(const frontend::MethodRecord& method) const override;

 private:
  SyntheticModelOptions options_;
};

// Reads <dir>/<dump_file_name(id)>.
class DumpDirectorySource : public AttentionSource {
 public:
  explicit DumpDirectorySource(std::filesystem::path dir) : dir_(std::move(dir)) {}
  std::string describe() const override;
  std::optional<AttentionBundle> lookup(const frontend::MethodRecord& method) const override;

 private:
  std::filesystem::path dir_;
};

// Runs an external extractor honoring the dump contract,
//   <command> --model <model> --methods <jsonl> --out <dir>
// once per missing method, caching dumps under `cache_dir`.
class ExtractorCommandSource : public AttentionSource {
 public:
  ExtractorCommandSource(std::string command, std::string model_id, std::filesystem::path cache_dir)
      : command_(std::move(command)), model_id_(std::move(model_id)), cache_dir_(cache_dir), cache_(cache_dir) {}
  std::string describe() const override;
  std::optional<AttentionBundle> lookup(const frontend::MethodRecord& method) const override;

 private:
  std::string command_;
  std::string model_id_;
  std::filesystem::path cache_dir_;
  DumpDirectorySource cache_;
};

// "synthetic", "dir:<path>" or "cmd:<command>". Throws ConfigError.
std::unique_ptr<AttentionSource> make_attention_source(const std::string& spec, const std::string& model_id,
                                                       const std::filesystem::path& cache_dir);

}  // namespace lasmut::attention
