#include "lasmut/frontend/frontend.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "lasmut/util/error.hpp"
#include "lasmut/util/fs.hpp"
#include "lasmut/util/jsonl.hpp"

namespace lasmut::frontend {

namespace fs = std::filesystem;

namespace {

struct Registry {
  std::mutex mu;
  std::map<std::string, std::shared_ptr<const Frontend>, std::less<>> frontends;

  Registry() { frontends.emplace("java", make_java_frontend()); }
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

std::string Frontend::normalize_statement(std::string_view statement) const {
  std::string out;
  for (const auto& t : tokenize(statement)) {
    if (!out.empty()) out.push_back(' ');
    out += t.text;
  }
  return out;
}

const Frontend& frontend_for(std::string_view language) {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  const auto it = r.frontends.find(language);
  if (it == r.frontends.end()) throw ConfigError("no frontend registered for language '" + std::string(language) + "'");
  return *it->second;
}

void register_frontend(std::shared_ptr<const Frontend> frontend) {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  r.frontends[std::string(frontend->language())] = std::move(frontend);
}

std::vector<std::string> registered_languages() {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  std::vector<std::string> out;
  for (const auto& [name, _] : r.frontends) out.push_back(name);
  return out;
}

ExtractionResult extract_methods(const fs::path& project_root, std::string_view language) {
  const Frontend& fe = frontend_for(language);
  if (!fs::exists(project_root)) throw IoError("project root does not exist: " + project_root.string());
  ExtractionResult result;
  std::vector<fs::path> files;
  for (const auto& ext : fe.extensions()) {
    auto found = util::find_files(project_root, ext);
    files.insert(files.end(), found.begin(), found.end());
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.generic_string() < b.generic_string(); });
  for (const auto& file : files) {
    const std::string rel = fs::relative(file, project_root).generic_string();
    std::string source;
    try {
      source = util::read_file(file);
    } catch (const IoError& e) {
      result.diagnostics.push_back({rel, e.what()});
      continue;
    }
    try {
      for (auto& lm : fe.extract_file(rel, source)) result.methods.push_back(std::move(lm.record));
    } catch (const ParseError& e) {
      result.diagnostics.push_back({rel, std::string("skipped, parse error at offset ") +
                                             std::to_string(e.offset()) + ": " + e.what()});
    }
  }
  return result;
}

std::vector<StatementSpan> segment_statements(std::string_view body, std::string_view language) {
  return frontend_for(language).segment_statements(body);
}

bool is_parseable(std::string_view candidate_text, std::string_view language) {
  return frontend_for(language).is_parseable(candidate_text);
}

}  // namespace lasmut::frontend
