#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "lasmut/attention/bundle.hpp"
#include "lasmut/attention/synthetic_model.hpp"
#include "lasmut/frontend/frontend.hpp"
#include "lasmut/util/jsonl.hpp"
#include "lasmut/util/subprocess.hpp"
#include "support.hpp"

using namespace lasmut;
namespace fs = std::filesystem;

namespace {

util::CommandResult cli(const std::string& args, const fs::path& cwd) {
  return util::run_command(util::shell_quote(lasmut::testing::cli_path().string()) + " " + args, cwd);
}

std::string q(const fs::path& p) { return util::shell_quote(p.string()); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, DumpContractWritesOneValidFilePerMethod) {
  lasmut::testing::ScratchDir tmp("cli-dump");
  auto r = cli("extract --project " + q(lasmut::testing::fixture("java_project")) + " --out methods.jsonl", tmp.path());
  ASSERT_EQ(r.exit_code, 0) << r.output;
  r = cli("dump --model synthetic-v1 --methods methods.jsonl --out dumps", tmp.path());
  ASSERT_EQ(r.exit_code, 0) << r.output;

  const auto methods = util::read_jsonl(tmp / "methods.jsonl");
  ASSERT_EQ(methods.size(), 12u);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(tmp / "dumps")) files += e.path().extension() == ".json";
  EXPECT_EQ(files, methods.size());
  for (const auto& j : methods) {
    const auto m = j.get<frontend::MethodRecord>();
    const auto path = tmp / "dumps" / attention::dump_file_name(m.id);
    ASSERT_TRUE(fs::exists(path)) << m.id;
    const auto b = attention::read_dump(path);
    EXPECT_NO_THROW(attention::validate(b, m.text().size()));
    EXPECT_EQ(b.model_id, "synthetic-v1");
    EXPECT_EQ(b.method_id, m.id);
    auto expected = attention::synthetic_attention(m.text());
    expected.method_id = m.id;
    EXPECT_EQ(b, expected);
  }
}

TEST(Cli, AnalyzeFromDumpDirMatchesBuiltInModel) {
  lasmut::testing::ScratchDir tmp("cli-analyze");
  ASSERT_EQ(cli("extract --project " + q(lasmut::testing::fixture("java_project")) + " --out m.jsonl", tmp.path()).exit_code, 0);
  ASSERT_EQ(cli("dump --methods m.jsonl --out d", tmp.path()).exit_code, 0);
  ASSERT_EQ(cli("analyze --methods m.jsonl --out a.jsonl", tmp.path()).exit_code, 0);
  ASSERT_EQ(cli("analyze --methods m.jsonl --attention dir:d --out b.jsonl", tmp.path()).exit_code, 0);
  EXPECT_FALSE(slurp(tmp / "a.jsonl").empty());
  EXPECT_EQ(slurp(tmp / "a.jsonl"), slurp(tmp / "b.jsonl"));
}

TEST(Cli, ExitCodes) {
  lasmut::testing::ScratchDir tmp("cli-exit");
  ASSERT_EQ(cli("extract --project " + q(lasmut::testing::fixture("java_project")) + " --out m.jsonl", tmp.path()).exit_code, 0);
  EXPECT_EQ(cli("dump --model codebert-base --methods m.jsonl --out d", tmp.path()).exit_code, 2);
  EXPECT_EQ(cli("run --config " + q(lasmut::testing::fixture("calc_run.json")) + " --output-dir runs --stop-after deploy",
                tmp.path())
                .exit_code,
            2);
  EXPECT_EQ(cli("run --project " + q(tmp / "missing") + " --skip-validation", tmp.path()).exit_code, 2);
  EXPECT_NE(cli("analyze --methods m.jsonl --k 0", tmp.path()).exit_code, 0);
  EXPECT_NE(cli("", tmp.path()).exit_code, 0);
}

TEST(Cli, RunAndReport) {
  lasmut::testing::ScratchDir tmp("cli-run");
  auto r = cli("run --config " + q(lasmut::testing::fixture("calc_run.json")) + " --output-dir runs", tmp.path());
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const auto nl = r.output.rfind(".json");
  ASSERT_NE(nl, std::string::npos);
  const auto start = r.output.rfind('\n', nl);
  const fs::path manifest = r.output.substr(start == std::string::npos ? 0 : start + 1, nl + 5 - (start + 1));
  ASSERT_TRUE(fs::exists(tmp / manifest)) << manifest;
  r = cli("report " + q(tmp / manifest), tmp.path());
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("6/5/4/4/3"), std::string::npos) << r.output;
  r = cli("report --json " + q((tmp / manifest).parent_path()), tmp.path());
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.output)["funnel"]["accepted"].get<int>(), 4);
}
