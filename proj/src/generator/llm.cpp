#include "lasmut/generator/llm.hpp"

#include <algorithm>
#include <cstdlib>
#include <regex>
#include <thread>

#include <httplib.h>

#include "lasmut/frontend/frontend.hpp"
#include "lasmut/util/hash.hpp"

namespace lasmut::generator {

using nlohmann::json;
namespace fs = std::filesystem;

void to_json(json& j, const ProviderConfig& c) {
  j = json{{"kind", c.kind},
           {"endpoint", c.endpoint},
           {"model", c.model},
           {"token_env", c.token_env},
           {"temperature", c.temperature},
           {"max_tokens", c.max_tokens},
           {"max_retries", c.max_retries},
           {"backoff_seconds", c.backoff_seconds},
           {"requests_per_second", c.requests_per_second},
           {"timeout_seconds", c.timeout_seconds},
           {"script", c.script},
           {"archive", c.archive}};
}

void from_json(const json& j, ProviderConfig& c) {
  ProviderConfig d;
  c.kind = j.value("kind", d.kind);
  c.endpoint = j.value("endpoint", d.endpoint);
  c.model = j.value("model", d.model);
  c.token_env = j.value("token_env", d.token_env);
  c.temperature = j.value("temperature", d.temperature);
  c.max_tokens = j.value("max_tokens", d.max_tokens);
  c.max_retries = j.value("max_retries", d.max_retries);
  c.backoff_seconds = j.value("backoff_seconds", d.backoff_seconds);
  c.requests_per_second = j.value("requests_per_second", d.requests_per_second);
  c.timeout_seconds = j.value("timeout_seconds", d.timeout_seconds);
  c.script = j.value("script", d.script);
  c.archive = j.value("archive", d.archive);
}

// ---- mock ------------------------------------------------------------------

namespace {

const frontend::Frontend& java() { return frontend::frontend_for("java"); }

struct Edit {
  std::size_t start;
  std::size_t end;
  std::string replacement;
};

std::string apply(const std::string& text, const Edit& e) {
  return text.substr(0, e.start) + e.replacement + text.substr(e.end);
}

std::pair<std::size_t, std::size_t> statement_range(const frontend::MethodRecord& m, int index) {
  if (index < 0 || static_cast<std::size_t>(index) >= m.statements.size()) {
    throw Error("mock target statement " + std::to_string(index) + " does not exist");
  }
  const auto& s = m.statements[static_cast<std::size_t>(index)];
  return {m.body_offset() + s.start, m.body_offset() + s.end};
}

// Single-token edits inside statement `index`, in preference order.
std::vector<Edit> token_edits(const frontend::MethodRecord& m, int index) {
  static const std::vector<std::pair<std::string, std::string>> kSwaps = {
      {"==", "!="}, {"!=", "=="}, {"<=", "<"}, {"<", "<="}, {"&&", "||"}, {"||", "&&"},
      {"+", "-"},   {"-", "+"},   {"*", "/"},  {">", "<"},  {"true", "false"}, {"false", "true"}};
  const auto [lo, hi] = statement_range(m, index);
  const std::string text = m.text();
  const auto tokens = java().tokenize(std::string_view(text).substr(lo, hi - lo));
  std::vector<Edit> literal_edits;
  std::vector<Edit> swap_edits;
  for (const auto& t : tokens) {
    const bool decimal = !t.text.empty() && t.text.find_first_not_of("0123456789") == std::string::npos;
    if (t.kind == frontend::TokenKind::literal && decimal && t.text.size() < 9) {
      literal_edits.push_back({lo + t.start, lo + t.end, std::to_string(std::stol(t.text) + 1)});
      continue;
    }
    for (const auto& [from, to] : kSwaps) {
      if (t.text == from) swap_edits.push_back({lo + t.start, lo + t.end, to});
    }
  }
  literal_edits.insert(literal_edits.end(), swap_edits.begin(), swap_edits.end());
  return literal_edits;
}

std::optional<std::string> mutate(const frontend::MethodRecord& m, int index) {
  const std::string text = m.text();
  for (const auto& e : token_edits(m, index)) {
    std::string out = apply(text, e);
    if (java().is_parseable(out)) return out;
  }
  return std::nullopt;
}

std::string comment_out(const frontend::MethodRecord& m, int index) {
  const auto [lo, hi] = statement_range(m, index);
  const std::string text = m.text();
  const std::string stmt = text.substr(lo, hi - lo);
  if (stmt.find("*/") != std::string::npos) return apply(text, {lo, hi, ""});
  return apply(text, {lo, hi, "/* " + stmt + " */"});
}

std::string remove_statement(const frontend::MethodRecord& m, int index) {
  const auto [lo, hi] = statement_range(m, index);
  return apply(m.text(), {lo, hi, ""});
}

int resolve_target(const json& target, const frontend::MethodRecord& m, const std::vector<int>& las) {
  if (target.is_number_integer()) return target.get<int>();
  const std::string t = target.is_string() ? target.get<std::string>() : "las";
  if (t == "las") {
    for (int i : las) {
      if (mutate(m, i)) return i;
    }
    return las.front();
  }
  if (t.rfind("las:", 0) == 0) return las[static_cast<std::size_t>(std::stoi(t.substr(4))) % las.size()];
  if (t == "non_las") {
    std::optional<int> first;
    for (const auto& s : m.statements) {
      if (std::find(las.begin(), las.end(), s.index) != las.end()) continue;
      if (!first) first = s.index;
      if (mutate(m, s.index)) return s.index;
    }
    if (!first) throw Error("every statement of the method is in the LAS");
    return *first;
  }
  throw ConfigError("unknown mock target '" + t + "'");
}

std::string fenced(const std::string& code) { return "```java\n" + code + "\n```\n"; }

}  // namespace

MockProvider::MockProvider(std::vector<json> script) : script_(std::move(script)) {}

std::unique_ptr<MockProvider> MockProvider::from_file(const fs::path& script) {
  return std::make_unique<MockProvider>(util::read_jsonl(script));
}

Completion MockProvider::complete(const PromptSpec& prompt, const std::string&) {
  json ops = json::array({{{"op", "mutate"}, {"target", "las"}},
                          {{"op", "mutate"}, {"target", "non_las"}},
                          {{"op", "break"}}});
  for (const auto& entry : script_) {
    const std::string match = entry.value("match", "");
    if (prompt.indexed_method.find(match) != std::string::npos || prompt.method_id.find(match) != std::string::npos) {
      ops = entry.at("responses");
      break;
    }
  }
  const std::string original = java().strip_index_markers(prompt.indexed_method);
  const auto m = java().parse_method(original);
  std::string response = "Here are the requested variants.\n\n";
  for (const auto& op : ops) {
    const std::string kind = op.at("op").get<std::string>();
    const json target = op.value("target", json("las"));
    if (kind == "mutate") {
      const int i = resolve_target(target, m, prompt.las_indices);
      response += fenced(mutate(m, i).value_or(comment_out(m, i)));
    } else if (kind == "comment_out") {
      response += fenced(comment_out(m, resolve_target(target, m, prompt.las_indices)));
    } else if (kind == "delete") {
      response += fenced(remove_statement(m, resolve_target(target, m, prompt.las_indices)));
    } else if (kind == "break") {
      std::string broken = original;
      broken.erase(broken.rfind('}'), 1);
      response += fenced(broken);
    } else if (kind == "echo") {
      response += fenced(original);
    } else if (kind == "raw") {
      response += fenced(op.at("text").get<std::string>());
    } else if (kind == "prose") {
      response += "The method looks correct as written.\n";
    } else {
      throw ConfigError("unknown mock op '" + kind + "'");
    }
  }
  return {response, id()};
}

// ---- http ------------------------------------------------------------------

HttpProvider::HttpProvider(ProviderConfig config) : config_(std::move(config)) {
  if (config_.endpoint.empty()) throw ConfigError("http provider needs an endpoint");
  if (const char* tok = std::getenv(config_.token_env.c_str())) token_ = tok;
}

Completion HttpProvider::complete(const PromptSpec& prompt, const std::string&) {
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(config_.endpoint, m, kUrl)) throw ConfigError("bad endpoint URL " + config_.endpoint);
  std::string path = m[2].matched ? m[2].str() : "";
  while (!path.empty() && path.back() == '/') path.pop_back();
  path += "/chat/completions";

  httplib::Client cli(m[1].str());
  cli.set_connection_timeout(std::chrono::seconds(config_.timeout_seconds));
  cli.set_read_timeout(std::chrono::seconds(config_.timeout_seconds));
  httplib::Headers headers;
  if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);
  const json body = {{"model", config_.model},
                     {"messages", json::array({{{"role", "user"}, {"content", prompt.rendered}}})},
                     {"temperature", config_.temperature},
                     {"max_tokens", config_.max_tokens}};
  auto res = cli.Post(path, headers, body.dump(), "application/json");
  if (!res) throw TransientError("request to " + config_.endpoint + " failed: " + httplib::to_string(res.error()));
  if (res->status == 429 || res->status >= 500) {
    throw TransientError("provider returned HTTP " + std::to_string(res->status));
  }
  if (res->status != 200) {
    throw Error("provider returned HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200));
  }
  try {
    const json reply = json::parse(res->body);
    return {reply.at("choices").at(0).at("message").at("content").get<std::string>(), id()};
  } catch (const json::exception& e) {
    throw Error("malformed provider response: " + std::string(e.what()));
  }
}

// ---- replay ----------------------------------------------------------------

ReplayProvider::ReplayProvider(const fs::path& archive) {
  for (const auto& r : util::read_jsonl(archive)) {
    if (!r.value("ok", true)) continue;
    responses_[r.at("request_id").get<std::string>()] =
        Completion{r.at("response").get<std::string>(), r.value("provider_id", std::string("replay"))};
  }
}

Completion ReplayProvider::complete(const PromptSpec& prompt, const std::string& request_id) {
  const auto it = responses_.find(request_id);
  if (it == responses_.end()) {
    throw Error("replay archive has no response for request " + request_id + " (" + prompt.method_id + ")");
  }
  return it->second;
}

std::unique_ptr<LlmProvider> make_provider(const ProviderConfig& config) {
  if (config.kind == "mock") {
    if (config.script.empty()) return std::make_unique<MockProvider>();
    return MockProvider::from_file(config.script);
  }
  if (config.kind == "http") return std::make_unique<HttpProvider>(config);
  if (config.kind == "replay") {
    if (config.archive.empty()) throw ConfigError("replay provider needs an archive");
    return std::make_unique<ReplayProvider>(config.archive);
  }
  throw ConfigError("unknown provider '" + config.kind + "'");
}

// ---- client ----------------------------------------------------------------

std::vector<std::string> extract_code_blocks(const std::string& response) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t open = response.find("```", pos);
    if (open == std::string::npos) break;
    const std::size_t line_end = response.find('\n', open);
    if (line_end == std::string::npos) break;
    std::size_t close = response.find("\n```", line_end);
    if (close == std::string::npos) break;
    out.push_back(response.substr(line_end + 1, close - line_end - 1));
    close += 4;
    const std::size_t after = response.find('\n', close);
    pos = after == std::string::npos ? response.size() : after;
  }
  return out;
}

namespace {

std::string strip_markers(const std::string& code) {
  try {
    return java().strip_index_markers(code);
  } catch (const ParseError&) {
    static const std::regex kMarker(R"(/\*[0-9]+\*/)");
    return std::regex_replace(code, kMarker, "");
  }
}

}  // namespace

LlmClient::LlmClient(std::unique_ptr<LlmProvider> provider, ProviderConfig config,
                     std::optional<fs::path> archive_path)
    : provider_(std::move(provider)), config_(std::move(config)) {
  if (archive_path) archive_ = std::make_unique<util::JsonlAppender>(*archive_path);
}

std::string LlmClient::request_id(const PromptSpec& prompt) const {
  const json key = {{"model", config_.model}, {"temperature", config_.temperature}, {"prompt", prompt.rendered}};
  return util::short_hash(key.dump());
}

void LlmClient::wait_for_slot() {
  if (config_.requests_per_second <= 0) return;
  const auto interval = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
      std::chrono::duration<double>(1.0 / config_.requests_per_second));
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard lock(rate_mu_);
    slot = std::max(std::chrono::steady_clock::now(), next_slot_);
    next_slot_ = slot + interval;
  }
  std::this_thread::sleep_until(slot);
}

QueryResult LlmClient::query(const PromptSpec& prompt) {
  QueryResult r;
  r.request_id = request_id(prompt);
  r.temperature = config_.temperature;
  Completion c;
  int attempts = 0;
  for (;;) {
    ++attempts;
    wait_for_slot();
    try {
      c = provider_->complete(prompt, r.request_id);
      break;
    } catch (const TransientError& e) {
      if (attempts > config_.max_retries) {
        throw Error("LLM request " + r.request_id + " failed after " + std::to_string(attempts) +
                    " attempts: " + e.what());
      }
      std::this_thread::sleep_for(std::chrono::duration<double>(config_.backoff_seconds * (1 << (attempts - 1))));
    }
  }
  r.provider_id = c.provider_id;
  r.archive_record = {{"request_id", r.request_id},     {"method_id", prompt.method_id},
                      {"provider_id", c.provider_id},   {"model", config_.model},
                      {"temperature", config_.temperature}, {"template_id", prompt.template_id},
                      {"prompt", prompt.rendered},      {"response", c.text},
                      {"ok", true}};
  if (archive_) archive_->append(r.archive_record);

  auto blocks = extract_code_blocks(c.text);
  if (blocks.empty()) r.warnings.push_back("response to " + r.request_id + " has no code blocks");
  if (blocks.size() > static_cast<std::size_t>(prompt.n_bugs)) {
    r.warnings.push_back("response to " + r.request_id + " has " + std::to_string(blocks.size()) +
                         " code blocks, keeping " + std::to_string(prompt.n_bugs));
    blocks.resize(static_cast<std::size_t>(prompt.n_bugs));
  }
  for (const auto& b : blocks) r.candidates.push_back(strip_markers(b));
  return r;
}

QueryResult query_llm(const PromptSpec& prompt, const ProviderConfig& config) {
  LlmClient client(make_provider(config), config);
  return client.query(prompt);
}

}  // namespace lasmut::generator
