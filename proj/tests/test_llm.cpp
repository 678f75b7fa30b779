#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include <httplib.h>

#include "lasmut/attention/analyzer.hpp"
#include "lasmut/attention/synthetic_model.hpp"
#include "lasmut/frontend/frontend.hpp"
#include "lasmut/generator/llm.hpp"
#include "lasmut/util/error.hpp"
#include "lasmut/util/jsonl.hpp"
#include "support.hpp"

using namespace lasmut::generator;
using nlohmann::json;

namespace {

lasmut::frontend::MethodRecord method() {
  auto m = lasmut::frontend::frontend_for("java").parse_method(
      "int f(int a) {\n  int b = a + 1;\n  if (b > 2) {\n    b = 2;\n  }\n  return b;\n}");
  m.id = "F.java::F.f#1";
  return m;
}

PromptSpec prompt(int n = 3) { return build_prompt(method(), {0}, n); }

// Fails `failures` times with a transient error, then answers.
class FlakyProvider : public LlmProvider {
 public:
  explicit FlakyProvider(int failures) : failures_(failures) {}
  std::string id() const override { return "flaky"; }
  Completion complete(const PromptSpec&, const std::string&) override {
    ++calls;
    if (failures_-- > 0) throw TransientError("503");
    return {"```java\nint f(int a) { /*0*/return a; }\n```\n", id()};
  }
  std::atomic<int> calls{0};

 private:
  int failures_;
};

ProviderConfig fast_config() {
  ProviderConfig c;
  c.backoff_seconds = 0.001;
  c.max_retries = 3;
  return c;
}

}  // namespace

TEST(CodeBlocks, Extraction) {
  EXPECT_EQ(extract_code_blocks("a\n```java\nx();\n```\nb\n```\ny();\nz();\n```"),
            (std::vector<std::string>{"x();", "y();\nz();"}));
  EXPECT_TRUE(extract_code_blocks("no code here").empty());
  EXPECT_TRUE(extract_code_blocks("```java\nunterminated").empty());
  EXPECT_EQ(extract_code_blocks("```\n\n```").size(), 1u);
}

TEST(LlmClient, RetriesTransientErrors) {
  auto provider = std::make_unique<FlakyProvider>(2);
  auto* raw = provider.get();
  LlmClient client(std::move(provider), fast_config());
  const auto r = client.query(prompt());
  EXPECT_EQ(raw->calls, 3);
  ASSERT_EQ(r.candidates.size(), 1u);
  EXPECT_EQ(r.candidates[0], "int f(int a) { return a; }");
  EXPECT_EQ(r.provider_id, "flaky");
}

TEST(LlmClient, GivesUpAfterMaxRetries) {
  LlmClient client(std::make_unique<FlakyProvider>(10), fast_config());
  EXPECT_THROW(client.query(prompt()), lasmut::Error);
}

TEST(LlmClient, RequestIdDependsOnModelTemperatureAndPrompt) {
  LlmClient a(std::make_unique<MockProvider>(), fast_config());
  auto cfg = fast_config();
  cfg.temperature = 0.7;
  LlmClient b(std::make_unique<MockProvider>(), cfg);
  EXPECT_EQ(a.request_id(prompt()), a.request_id(prompt()));
  EXPECT_NE(a.request_id(prompt()), b.request_id(prompt()));
  EXPECT_NE(a.request_id(prompt(3)), a.request_id(prompt(2)));
  cfg = fast_config();
  cfg.kind = "replay";
  LlmClient c(std::make_unique<MockProvider>(), cfg);
  EXPECT_EQ(a.request_id(prompt()), c.request_id(prompt()));
}

TEST(LlmClient, KeepsAtMostNBlocksWithWarning) {
  std::vector<json> script{json::parse(R"({"match": "", "responses": [{"op":"echo"},{"op":"echo"},{"op":"echo"}]})")};
  LlmClient client(std::make_unique<MockProvider>(script), fast_config());
  const auto r = client.query(prompt(2));
  EXPECT_EQ(r.candidates.size(), 2u);
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_EQ(r.candidates[0], method().text());
}

TEST(LlmClient, NoBlocksIsAWarning) {
  std::vector<json> script{json::parse(R"({"match": "", "responses": [{"op":"prose"}]})")};
  LlmClient client(std::make_unique<MockProvider>(script), fast_config());
  const auto r = client.query(prompt());
  EXPECT_TRUE(r.candidates.empty());
  EXPECT_EQ(r.warnings.size(), 1u);
}

TEST(LlmClient, ArchiveAndReplay) {
  lasmut::testing::ScratchDir dir("llm");
  const auto archive = dir / "archive.jsonl";
  QueryResult live;
  {
    LlmClient client(std::make_unique<MockProvider>(), fast_config(), archive);
    live = client.query(prompt());
  }
  const auto records = lasmut::util::read_jsonl(archive);
  ASSERT_EQ(records.size(), 1u);
  for (const char* key : {"request_id", "method_id", "provider_id", "model", "temperature", "template_id", "prompt",
                          "response", "ok"}) {
    EXPECT_TRUE(records[0].contains(key)) << key;
  }
  EXPECT_FALSE(records[0].contains("timestamp"));

  auto cfg = fast_config();
  cfg.kind = "replay";
  cfg.archive = archive.string();
  const auto replayed = query_llm(prompt(), cfg);
  EXPECT_EQ(replayed.candidates, live.candidates);
  EXPECT_EQ(replayed.provider_id, "mock");
  EXPECT_THROW(query_llm(build_prompt(method(), {1}, 3), cfg), lasmut::Error);
}

TEST(MockProvider, DefaultScript) {
  const auto m = method();
  const auto r = query_llm(prompt(), fast_config());
  ASSERT_EQ(r.candidates.size(), 3u);
  const auto& fe = lasmut::frontend::frontend_for("java");
  EXPECT_TRUE(fe.is_parseable(r.candidates[0]));
  EXPECT_TRUE(fe.is_parseable(r.candidates[1]));
  EXPECT_FALSE(fe.is_parseable(r.candidates[2]));
  // (a) touches statement 0 only; (b) a different statement.
  const auto da = lasmut::frontend::diff_statements(m, r.candidates[0]);
  ASSERT_EQ(da.size(), 1u);
  EXPECT_EQ(da[0].original, 0);
  const auto db = lasmut::frontend::diff_statements(m, r.candidates[1]);
  ASSERT_EQ(db.size(), 1u);
  EXPECT_NE(db[0].original, 0);
}

TEST(MockProvider, OpsAndErrors) {
  std::vector<json> script{json::parse(
      R"({"match": "F.f", "responses": [{"op":"delete","target":3},{"op":"comment_out","target":"las:0"},{"op":"raw","text":"x"}]})")};
  const auto r = LlmClient(std::make_unique<MockProvider>(script), fast_config()).query(prompt());
  ASSERT_EQ(r.candidates.size(), 3u);
  EXPECT_EQ(r.candidates[0].find("return b;"), std::string::npos);
  EXPECT_NE(r.candidates[1].find("/* int b = a + 1; */"), std::string::npos);
  EXPECT_EQ(r.candidates[2], "x");
  std::vector<json> bad{json::parse(R"({"match": "", "responses": [{"op":"teleport"}]})")};
  EXPECT_THROW(LlmClient(std::make_unique<MockProvider>(bad), fast_config()).query(prompt()), lasmut::ConfigError);
}

TEST(Providers, Factory) {
  ProviderConfig c;
  c.kind = "bogus";
  EXPECT_THROW(make_provider(c), lasmut::ConfigError);
  c.kind = "replay";
  EXPECT_THROW(make_provider(c), lasmut::ConfigError);
  c.kind = "http";
  EXPECT_THROW(make_provider(c), lasmut::ConfigError);
  c.kind = "mock";
  EXPECT_EQ(make_provider(c)->id(), "mock");
}

TEST(Providers, ConfigJsonRoundTrip) {
  ProviderConfig c;
  c.kind = "http";
  c.endpoint = "http://localhost:1/v1";
  c.temperature = 0.2;
  const json j = c;
  EXPECT_EQ(json(j.get<ProviderConfig>()), j);
}

TEST(HttpProvider, ChatCompletionsWithRetryOnServerError) {
  httplib::Server server;
  std::atomic<int> hits{0};
  std::string auth;
  json request;
  server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    if (hits++ == 0) {
      res.status = 503;
      return;
    }
    auth = req.get_header_value("Authorization");
    request = json::parse(req.body);
    const json reply = {{"choices", json::array({{{"message", {{"role", "assistant"},
                                                               {"content", "```java\nint f(int a) { return 0; }\n```"}}}}})}};
    res.set_content(reply.dump(), "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  ::setenv("LASMUT_TEST_TOKEN", "secret", 1);
  ProviderConfig c = fast_config();
  c.kind = "http";
  c.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/";
  c.model = "tiny";
  c.token_env = "LASMUT_TEST_TOKEN";
  c.timeout_seconds = 5;
  const auto r = query_llm(prompt(), c);
  server.stop();
  t.join();

  EXPECT_EQ(hits, 2);
  EXPECT_EQ(auth, "Bearer secret");
  EXPECT_EQ(request.at("model"), "tiny");
  EXPECT_EQ(request.at("messages").at(0).at("content"), prompt().rendered);
  ASSERT_EQ(r.candidates.size(), 1u);
  EXPECT_EQ(r.provider_id, "http:tiny");
}

TEST(HttpProvider, ClientErrorsAreNotRetried) {
  httplib::Server server;
  std::atomic<int> hits{0};
  server.Post("/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
    ++hits;
    res.status = 400;
    res.set_content("bad request", "text/plain");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  ProviderConfig c = fast_config();
  c.kind = "http";
  c.endpoint = "http://127.0.0.1:" + std::to_string(port);
  EXPECT_THROW(query_llm(prompt(), c), lasmut::Error);
  server.stop();
  t.join();
  EXPECT_EQ(hits, 1);
}
