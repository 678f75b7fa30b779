#include <gtest/gtest.h>

#include "lasmut/util/error.hpp"
#include "lasmut/util/jsonl.hpp"
#include "lasmut/util/subprocess.hpp"
#include "lasmut/validator/harness.hpp"
#include "support.hpp"

using namespace lasmut::validator;
using lasmut::testing::ScratchDir;

TEST(JUnit, ParsesCasesAndStatuses) {
  const std::string xml = R"(<?xml version="1.0"?>
<testsuite name="s" tests="4">
  <testcase classname="demo.CalcTest" name="adds" time="0.012"/>
  <testcase classname="demo.CalcTest" name="subtracts" time="0.5">
    <failure message="expected 1">trace</failure>
  </testcase>
  <testcase classname="demo.CalcTest" name="divides"><error type="X"/></testcase>
  <testcase name="bare"><skipped/></testcase>
</testsuite>)";
  const auto r = parse_junit_xml(xml);
  ASSERT_EQ(r.size(), 4u);
  EXPECT_EQ(r[0].id, "demo.CalcTest.adds");
  EXPECT_EQ(r[0].status, TestStatus::passed);
  ASSERT_TRUE(r[0].seconds.has_value());
  EXPECT_DOUBLE_EQ(*r[0].seconds, 0.012);
  EXPECT_EQ(r[1].status, TestStatus::failed);
  EXPECT_EQ(r[2].status, TestStatus::failed);
  EXPECT_EQ(r[3].id, "bare");
  EXPECT_EQ(r[3].status, TestStatus::skipped);
  EXPECT_TRUE(parse_junit_xml("<testsuite/>").empty());
}

TEST(Tap, ParsesLinesAndDirectives) {
  const auto r = parse_tap("TAP version 13\n1..5\nok 1 - alpha\nnot ok 2 - beta\nok 3 gamma # SKIP slow\n"
                           "not ok 4 - delta # TODO later\nok 5\n# comment\n");
  ASSERT_EQ(r.size(), 5u);
  EXPECT_EQ(r[0].id, "alpha");
  EXPECT_EQ(r[0].status, TestStatus::passed);
  EXPECT_EQ(r[1].id, "beta");
  EXPECT_EQ(r[1].status, TestStatus::failed);
  EXPECT_EQ(r[2].id, "gamma");
  EXPECT_EQ(r[2].status, TestStatus::skipped);
  EXPECT_EQ(r[3].status, TestStatus::skipped);
  EXPECT_EQ(r[4].id, "5");
}

TEST(Harness, LoadResolvesCoveredMethods) {
  ScratchDir dir("harness");
  lasmut::util::write_file(dir / "covered.txt", "b\n\na  \n");
  lasmut::util::write_json(dir / "h.json", {{"build_cmd", "make"},
                                            {"test_cmd", "make test"},
                                            {"report_format", "junit-xml"},
                                            {"report_glob", "target/*.xml"},
                                            {"covered_methods", "covered.txt"}});
  const auto h = load_harness(dir / "h.json");
  EXPECT_EQ(h.report_format, ReportFormat::junit_xml);
  ASSERT_TRUE(h.covered_methods.has_value());
  EXPECT_EQ(*h.covered_methods, dir / "covered.txt");
  EXPECT_EQ(read_covered_methods(*h.covered_methods), (std::vector<std::string>{"a", "b"}));
  lasmut::util::write_file(dir / "covered.json", "[\"z\", \"y\"]");
  EXPECT_EQ(read_covered_methods(dir / "covered.json"), (std::vector<std::string>{"y", "z"}));
  EXPECT_DOUBLE_EQ(h.timeout_factor, 5.0);
}

TEST(Harness, LoadErrors) {
  ScratchDir dir("harness");
  lasmut::util::write_json(dir / "h.json", {{"build_cmd", "make"}});
  EXPECT_THROW(load_harness(dir / "h.json"), lasmut::ConfigError);
  lasmut::util::write_json(dir / "h2.json", {{"test_cmd", "t"}, {"report_format", "csv"}});
  EXPECT_THROW(load_harness(dir / "h2.json"), lasmut::ConfigError);
  EXPECT_THROW(load_harness(dir / "missing.json"), lasmut::Error);
}

TEST(Harness, ExitCodeFormat) {
  ScratchDir dir("harness");
  HarnessConfig h;
  h.test_cmd = "sh -c 'test -f ok.flag' x";
  h.test_filter_flag = "--only";
  auto run = run_tests(h, dir.path());
  ASSERT_EQ(run.results.size(), 1u);
  EXPECT_EQ(run.results[0].id, "suite");
  EXPECT_EQ(run.results[0].status, TestStatus::failed);
  lasmut::util::write_file(dir / "ok.flag", "");
  run = run_tests(h, dir.path(), std::string("only_this"));
  EXPECT_EQ(run.results[0].id, "only_this");
  EXPECT_EQ(run.results[0].status, TestStatus::passed);
  h.test_filter_flag.clear();
  EXPECT_THROW(run_tests(h, dir.path(), std::string("only_this")), lasmut::ConfigError);
}

TEST(Harness, FilterFlagAndReportFiles) {
  ScratchDir dir("harness");
  HarnessConfig h;
  h.test_cmd = "sh -c 'mkdir -p out; echo \"ok 1 - $2\" > out/r.tap' x";
  h.test_filter_flag = "--only";
  h.report_format = ReportFormat::tap;
  h.report_glob = "out/*.tap";
  std::filesystem::create_directories(dir / "out");
  lasmut::util::write_file(dir / "out/stale.tap", "ok 1 - stale\n");
  const auto run = run_tests(h, dir.path(), std::string("it's quoted"));
  ASSERT_EQ(run.results.size(), 1u);
  EXPECT_EQ(run.results[0].id, "it's quoted");
  EXPECT_FALSE(std::filesystem::exists(dir / "out/stale.tap"));
  h.test_filter_flag.clear();
  EXPECT_THROW(run_tests(h, dir.path(), std::string("x")), lasmut::ConfigError);
}

TEST(Harness, TimeoutKillsTheRun) {
  ScratchDir dir("harness");
  HarnessConfig h;
  h.test_cmd = "sleep 5";
  const auto run = run_tests(h, dir.path(), std::nullopt, 0.2);
  EXPECT_TRUE(run.timed_out);
  EXPECT_LT(run.seconds, 2.0);
  EXPECT_EQ(run.results.at(0).status, TestStatus::failed);
}

TEST(Subprocess, QuotingAndSubstitution) {
  EXPECT_EQ(lasmut::util::shell_quote("a b'c"), "'a b'\\''c'");
  EXPECT_EQ(lasmut::util::substitute("x {a} {a} {b}", "a", "1"), "x 1 1 {b}");
  const auto r = lasmut::util::run_command("echo out; echo err >&2; exit 3", std::filesystem::temp_directory_path());
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_NE(r.output.find("out"), std::string::npos);
  EXPECT_NE(r.output.find("err"), std::string::npos);
}
