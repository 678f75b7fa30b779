#include "lasmut/attention/source.hpp"

#include "lasmut/util/error.hpp"
#include "lasmut/util/jsonl.hpp"
#include "lasmut/util/subprocess.hpp"

namespace lasmut::attention {

namespace fs = std::filesystem;

std::string SyntheticSource::describe() const { return std::string(kSyntheticModelId); }

std::optional<AttentionBundle> SyntheticSource::lookup(const frontend::MethodRecord& method) const {
  auto b = synthetic_attention(method.text(), options_);
  b.method_id = method.id;
  return b;
}

std::string DumpDirectorySource::describe() const { return "dir:" + dir_.string(); }

std::optional<AttentionBundle> DumpDirectorySource::lookup(const frontend::MethodRecord& method) const {
  const fs::path p = dir_ / dump_file_name(method.id);
  if (!fs::exists(p)) return std::nullopt;
  auto b = read_dump(p);
  validate(b, method.text().size());
  return b;
}

std::string ExtractorCommandSource::describe() const { return "cmd:" + command_; }

std::optional<AttentionBundle> ExtractorCommandSource::lookup(const frontend::MethodRecord& method) const {
  if (auto b = cache_.lookup(method)) return b;
  fs::create_directories(cache_dir_);
  const fs::path input = cache_dir_ / (dump_file_name(method.id) + ".methods.jsonl");
  util::write_jsonl(input, {nlohmann::json(method)});
  const std::string cmd = command_ + " --model " + util::shell_quote(model_id_) + " --methods " +
                          util::shell_quote(input.string()) + " --out " + util::shell_quote(cache_dir_.string());
  const auto r = util::run_command(cmd, fs::current_path());
  fs::remove(input);
  if (r.exit_code != 0) return std::nullopt;
  return cache_.lookup(method);
}

std::unique_ptr<AttentionSource> make_attention_source(const std::string& spec, const std::string& model_id,
                                                       const fs::path& cache_dir) {
  if (spec == "synthetic" || spec.empty()) {
    if (!model_id.empty() && model_id != kSyntheticModelId) {
      throw ConfigError("the synthetic source only provides model " + std::string(kSyntheticModelId));
    }
    return std::make_unique<SyntheticSource>();
  }
  if (spec.rfind("dir:", 0) == 0) return std::make_unique<DumpDirectorySource>(spec.substr(4));
  if (spec.rfind("cmd:", 0) == 0) {
    return std::make_unique<ExtractorCommandSource>(spec.substr(4), model_id, cache_dir);
  }
  throw ConfigError("unknown attention source '" + spec + "'");
}

}  // namespace lasmut::attention
