#include "lasmut/pipeline/config.hpp"

#include "lasmut/util/error.hpp"
#include "lasmut/util/hash.hpp"
#include "lasmut/util/jsonl.hpp"

namespace lasmut::pipeline {

using nlohmann::json;
namespace fs = std::filesystem;

void RunConfig::validate() const {
  if (k < 1 || k > 100) throw ConfigError("k must be in [1, 100]");
  if (n_bugs < 1) throw ConfigError("n_bugs must be at least 1");
  if (workers < 1) throw ConfigError("workers must be at least 1");
  if (provider.kind != "mock" && provider.kind != "http" && provider.kind != "replay") {
    throw ConfigError("unknown provider kind '" + provider.kind + "'");
  }
  if (attention != "synthetic" && attention.rfind("dir:", 0) != 0 && attention.rfind("cmd:", 0) != 0) {
    throw ConfigError("attention must be synthetic, dir:<path> or cmd:<command>");
  }
  if (project_root.empty() || !fs::is_directory(project_root)) {
    throw ConfigError("project_root " + project_root.string() + " is not a directory");
  }
  if (!skip_validation && !harness_path) throw ConfigError("a harness config is required unless validation is skipped");
  if (harness_path && !fs::exists(*harness_path)) throw ConfigError("harness config " + harness_path->string() + " not found");
}

std::string RunConfig::hash() const {
  json j = *this;
  j.erase("output_dir");
  j.erase("workers");
  return util::short_hash(j.dump(), 8);
}

void to_json(json& j, const RunConfig& c) {
  json compare = json::array();
  for (const auto& d : c.compare) compare.push_back({{"id", d.id}, {"path", d.path.string()}});
  j = json{{"project_root", c.project_root.string()},
           {"language", c.language},
           {"model_id", c.model_id},
           {"attention", c.attention},
           {"k", c.k},
           {"n_bugs", c.n_bugs},
           {"prompt_template", c.prompt_template},
           {"context_budget", c.context_budget},
           {"provider", c.provider},
           {"harness", c.harness_path ? json(c.harness_path->string()) : json(nullptr)},
           {"skip_validation", c.skip_validation},
           {"output_dir", c.output_dir.string()},
           {"seed", c.seed},
           {"workers", c.workers},
           {"compare", compare}};
}

void from_json(const json& j, RunConfig& c) {
  RunConfig d;
  c.project_root = j.value("project_root", std::string{});
  c.language = j.value("language", d.language);
  c.model_id = j.value("model_id", d.model_id);
  c.attention = j.value("attention", d.attention);
  c.k = j.value("k", d.k);
  c.n_bugs = j.value("n_bugs", d.n_bugs);
  c.prompt_template = j.value("prompt_template", d.prompt_template);
  c.context_budget = j.value("context_budget", d.context_budget);
  c.provider = j.value("provider", d.provider);
  if (j.contains("harness") && !j.at("harness").is_null()) c.harness_path = j.at("harness").get<std::string>();
  c.skip_validation = j.value("skip_validation", d.skip_validation);
  c.output_dir = j.value("output_dir", d.output_dir.string());
  c.seed = j.value("seed", d.seed);
  c.workers = j.value("workers", d.workers);
  c.compare.clear();
  for (const auto& x : j.value("compare", json::array())) {
    c.compare.push_back({x.at("id").get<std::string>(), x.at("path").get<std::string>()});
  }
}

RunConfig load_run_config(const fs::path& path) {
  RunConfig c;
  try {
    c = util::read_json(path).get<RunConfig>();
  } catch (const json::exception& e) {
    throw ConfigError("bad run config " + path.string() + ": " + e.what());
  }
  const fs::path base = path.parent_path();
  auto resolve = [&](fs::path p) { return p.empty() || p.is_absolute() ? p : base / p; };
  c.project_root = resolve(c.project_root);
  c.output_dir = resolve(c.output_dir);
  if (c.harness_path) c.harness_path = resolve(*c.harness_path);
  for (auto& d : c.compare) d.path = resolve(d.path);
  if (!c.provider.script.empty()) c.provider.script = resolve(c.provider.script).string();
  if (!c.provider.archive.empty()) c.provider.archive = resolve(c.provider.archive).string();
  if (c.attention.rfind("dir:", 0) == 0) c.attention = "dir:" + resolve(c.attention.substr(4)).string();
  return c;
}

}  // namespace lasmut::pipeline
