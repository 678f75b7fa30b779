#pragma once
// LLM client: providers, retries, rate limiting and the request archive.

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lasmut/generator/prompt.hpp"
#include "lasmut/util/error.hpp"
#include "lasmut/util/jsonl.hpp"

namespace lasmut::generator {

struct ProviderConfig {
  std::string kind = "mock";  // mock | http | replay
  std::string endpoint;       // http: base URL of an OpenAI-compatible API
  std::string model = "mock";
  std::string token_env = "LASMUT_API_KEY";
  double temperature = 0.0;
  int max_tokens = 2048;
  int max_retries = 4;
  double backoff_seconds = 0.5;     // first retry delay, doubled each retry
  double requests_per_second = 0;   // 0 = unlimited
  int timeout_seconds = 120;
  std::string script;   // mock: JSONL script file; empty = built-in script
  std::string archive;  // replay: archive to answer from
};

void to_json(nlohmann::json& j, const ProviderConfig& c);
void from_json(const nlohmann::json& j, ProviderConfig& c);

// Retryable failure: transport error, HTTP 429 or 5xx.
class TransientError : public Error {
 public:
  using Error::Error;
};

struct Completion {
  std::string text;
  std::string provider_id;
};

class LlmProvider {
 public:
  virtual ~LlmProvider() = default;
  virtual std::string id() const = 0;
  // Throws TransientError for retryable failures, Error otherwise.
  virtual Completion complete(const PromptSpec& prompt, const std::string& request_id) = 0;
};

// Deterministic scripted provider. Each script entry names a substring of the
// indexed method ("" matches everything) and a list of variant operations:
//   {"op": "mutate", "target": "las" | "las:<i>" | "non_las" | <index>}
//   {"op": "comment_out", "target": ...}   {"op": "delete", "target": ...}
//   {"op": "break"}  {"op": "echo"}  {"op": "raw", "text": "..."}  {"op": "prose"}
// Without a script every method gets [mutate las, mutate non_las, break].
class MockProvider : public LlmProvider {
 public:
  explicit MockProvider(std::vector<nlohmann::json> script = {});
  static std::unique_ptr<MockProvider> from_file(const std::filesystem::path& script);
  std::string id() const override { return "mock"; }
  Completion complete(const PromptSpec& prompt, const std::string& request_id) override;

 private:
  std::vector<nlohmann::json> script_;
};

class HttpProvider : public LlmProvider {
 public:
  explicit HttpProvider(ProviderConfig config);
  std::string id() const override { return "http:" + config_.model; }
  Completion complete(const PromptSpec& prompt, const std::string& request_id) override;

 private:
  ProviderConfig config_;
  std::string token_;
};

// Answers from an archive written by LlmClient, keyed by request id.
class ReplayProvider : public LlmProvider {
 public:
  explicit ReplayProvider(const std::filesystem::path& archive);
  std::string id() const override { return "replay"; }
  Completion complete(const PromptSpec& prompt, const std::string& request_id) override;

 private:
  std::map<std::string, Completion> responses_;
};

std::unique_ptr<LlmProvider> make_provider(const ProviderConfig& config);

// Code of every fenced block (``` or ```lang), in order.
std::vector<std::string> extract_code_blocks(const std::string& response);

struct QueryResult {
  std::string request_id;
  std::string provider_id;
  double temperature = 0.0;
  std::vector<std::string> candidates;  // at most prompt.n_bugs, index markers stripped
  std::vector<std::string> warnings;
  nlohmann::json archive_record;  // request and response, no timestamps
};

// Thread-safe wrapper adding retries and a global request rate. With an
// archive path every call is appended there as it completes.
class LlmClient {
 public:
  LlmClient(std::unique_ptr<LlmProvider> provider, ProviderConfig config,
            std::optional<std::filesystem::path> archive_path = std::nullopt);

  // Throws Error when retries are exhausted.
  QueryResult query(const PromptSpec& prompt);

  // Stable id from the model, temperature and rendered prompt.
  std::string request_id(const PromptSpec& prompt) const;

 private:
  void wait_for_slot();

  std::unique_ptr<LlmProvider> provider_;
  ProviderConfig config_;
  std::unique_ptr<util::JsonlAppender> archive_;
  std::mutex rate_mu_;
  std::chrono::steady_clock::time_point next_slot_{};
};

// query_llm as a single call with a fresh client.
QueryResult query_llm(const PromptSpec& prompt, const ProviderConfig& config);

}  // namespace lasmut::generator
