#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "lasmut/metrics/table.hpp"
#include "support.hpp"

using namespace lasmut;
using namespace lasmut::metrics;
using nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<ProjectData> load_projects() {
  const auto j = json::parse(slurp(lasmut::testing::fixture("table/projects.json")));
  std::vector<ProjectData> out;
  for (const auto& p : j) {
    out.push_back({p.at("project").get<std::string>(), p.at("records").get<std::vector<MetricsRecord>>(),
                   p.at("outcomes").get<std::vector<validator::ValidationOutcome>>()});
  }
  return out;
}

void expect_row(const TableRow& r, double m, double scm, double cb, std::optional<double> si,
                std::optional<double> ld, std::optional<double> ed, std::optional<double> em,
                std::optional<double> codebleu) {
  SCOPED_TRACE(r.project);
  EXPECT_EQ(r.m, m);
  EXPECT_EQ(r.scm, scm);
  EXPECT_EQ(r.cb, cb);
  EXPECT_EQ(r.mean_si, si);
  EXPECT_EQ(r.pct_ld, ld);
  EXPECT_EQ(r.mean_ed, ed);
  ASSERT_EQ(r.overlaps.size(), 1u);
  EXPECT_EQ(r.overlaps[0].dataset_id, "lb");
  EXPECT_EQ(r.overlaps[0].em, em);
  EXPECT_EQ(r.overlaps[0].codebleu, codebleu);
}

}  // namespace

TEST(Table, MatchesHandComputedValues) {
  const auto t = aggregate_table(load_projects());
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.dataset_ids, std::vector<std::string>{"lb"});
  expect_row(t.rows[0], 5, 4, 4, 2.0, 25.0, 10.0, 0.5, 0.5);
  expect_row(t.rows[1], 2, 2, 1, 1.0, 100.0, 3.0, std::nullopt, std::nullopt);
  expect_row(t.rows[2], 0, 0, 0, 0.0, 0.0, 0.0, std::nullopt, std::nullopt);
  expect_row(t.total, 7, 6, 5, std::nullopt, std::nullopt, std::nullopt, std::nullopt, std::nullopt);
  expect_row(t.average, 7.0 / 3, 2, 5.0 / 3, 1.0, 125.0 / 3, 13.0 / 3, 0.5, 0.5);
}

TEST(Table, CsvMatchesExpectedFile) {
  const auto t = aggregate_table(load_projects());
  EXPECT_EQ(to_csv(t), slurp(lasmut::testing::fixture("table/expected.csv")));
}

TEST(Table, JsonUsesNullForMissingCells) {
  const auto j = json(aggregate_table(load_projects()));
  EXPECT_EQ(j["rows"].size(), 3u);
  EXPECT_TRUE(j["total"]["SI"].is_null());
  EXPECT_TRUE(j["rows"][1]["overlaps"][0]["em"].is_null());
  EXPECT_EQ(j["average"]["SCM"].get<double>(), 2.0);
  EXPECT_EQ(j["codebleu"]["max_order"].get<int>(), 4);
}

TEST(Table, SingleRowAndEmptyInput) {
  const auto projects = load_projects();
  const auto row = aggregate_row("beta", projects[1].records, projects[1].outcomes);
  EXPECT_EQ(row.cb, 1);
  EXPECT_TRUE(row.overlaps.empty());

  const auto empty = aggregate_table({});
  EXPECT_TRUE(empty.rows.empty());
  EXPECT_EQ(empty.average.m, 0);
  EXPECT_FALSE(empty.average.mean_si);
}

TEST(Table, RecordsWithoutOutcomesCountOnlyTowardM) {
  MetricsRecord r;
  r.mutant_id = "orphan";
  const auto row = aggregate_row("p", {r}, {});
  EXPECT_EQ(row.m, 1);
  EXPECT_EQ(row.scm, 0);
  EXPECT_EQ(row.cb, 0);
}
