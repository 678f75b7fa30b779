#include "lasmut/pipeline/manifest.hpp"

#include "lasmut/util/error.hpp"
#include "lasmut/util/hash.hpp"
#include "lasmut/util/jsonl.hpp"

namespace lasmut::pipeline {

using nlohmann::json;
namespace fs = std::filesystem;

ArtifactEntry hash_artifact(const fs::path& run_dir, const std::string& rel_path) {
  const fs::path p = run_dir / rel_path;
  return ArtifactEntry{rel_path, util::sha256_file(p), fs::file_size(p)};
}

std::vector<std::string> RunManifest::verify(const fs::path& run_dir) const {
  std::vector<std::string> bad;
  for (const auto& a : artifacts) {
    const fs::path p = run_dir / a.path;
    if (!fs::exists(p) || util::sha256_file(p) != a.sha256) bad.push_back(a.path);
  }
  return bad;
}

void to_json(json& j, const RunManifest& m) {
  json stages = json::array();
  for (const auto& s : m.stages) stages.push_back({{"name", s.name}, {"status", s.status}});
  json artifacts = json::array();
  for (const auto& a : m.artifacts) artifacts.push_back({{"path", a.path}, {"sha256", a.sha256}, {"bytes", a.bytes}});
  j = json{{"config_hash", m.config_hash}, {"stages", stages}, {"artifacts", artifacts}, {"unhashed", m.unhashed}};
}

void from_json(const json& j, RunManifest& m) {
  j.at("config_hash").get_to(m.config_hash);
  m.stages.clear();
  for (const auto& s : j.at("stages")) m.stages.push_back({s.at("name").get<std::string>(), s.at("status").get<std::string>()});
  m.artifacts.clear();
  for (const auto& a : j.at("artifacts")) {
    m.artifacts.push_back({a.at("path").get<std::string>(), a.at("sha256").get<std::string>(),
                           a.at("bytes").get<std::uintmax_t>()});
  }
  m.unhashed = j.value("unhashed", std::vector<std::string>{});
}

RunManifest read_manifest(const fs::path& path) {
  try {
    return util::read_json(path).get<RunManifest>();
  } catch (const json::exception& e) {
    throw Error("bad manifest " + path.string() + ": " + e.what());
  }
}

}  // namespace lasmut::pipeline
