#pragma once
// Per-project summary table: one row per project plus Total and Average.

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lasmut/metrics/metrics.hpp"
#include "lasmut/validator/validator.hpp"

namespace lasmut::metrics {

struct OverlapCell {
  std::string dataset_id;
  std::optional<double> em;        // share of confirmed bugs with an exact match
  std::optional<double> codebleu;  // mean over confirmed bugs
};

struct TableRow {
  std::string project;
  double m = 0;    // mutants (metrics records)
  double scm = 0;  // compiled
  double cb = 0;   // confirmed bugs (killed)
  std::optional<double> mean_si;        // over confirmed bugs
  std::optional<double> pct_ld;         // percent of confirmed bugs that only delete
  std::optional<double> mean_ed;        // edit distance per confirmed bug
  std::vector<OverlapCell> overlaps;
};

struct ProjectData {
  std::string project;
  std::vector<MetricsRecord> records;
  std::vector<validator::ValidationOutcome> outcomes;
};

struct Table {
  std::vector<TableRow> rows;  // per project, input order
  TableRow total;              // count columns summed, others null
  TableRow average;            // arithmetic mean of the project rows
  std::vector<std::string> dataset_ids;
};

// A project without confirmed bugs yields zeros in the mean columns.
Table aggregate_table(const std::vector<ProjectData>& projects);

// Single-project form.
TableRow aggregate_row(const std::string& project, const std::vector<MetricsRecord>& records,
                       const std::vector<validator::ValidationOutcome>& outcomes);

void to_json(nlohmann::json& j, const TableRow& r);
void to_json(nlohmann::json& j, const Table& t);
std::string to_csv(const Table& t);

}  // namespace lasmut::metrics
