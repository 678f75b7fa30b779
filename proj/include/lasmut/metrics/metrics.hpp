#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lasmut/frontend/frontend.hpp"
#include "lasmut/metrics/codebleu.hpp"
#include "lasmut/metrics/edit_distance.hpp"

namespace lasmut::metrics {

// Distinct statements touched: original indices of removed and modified
// entries plus mutant indices of added entries.
int statements_involved(const std::vector<frontend::StatementDiff>& diff);

// True iff the diff is non-empty and every entry is a removal, or a
// modification whose mutant statement holds nothing but a comment.
bool deletion_only(const std::vector<frontend::StatementDiff>& diff, const frontend::MethodRecord& original,
                   const frontend::MethodRecord& mutant, std::string_view language = "java");

// 1 iff identical after CRLF/CR -> LF normalization.
int exact_match(std::string_view a, std::string_view b);

// A mutant in some dataset, keyed by the method it was derived from.
struct DatasetMutant {
  std::string method_key;
  std::string mutant_id;
  std::string text;
};

struct Overlap {
  std::size_t pairs = 0;
  std::size_t ours_paired = 0;         // our mutants with at least one pair
  std::optional<double> em_rate;       // null without pairs
  std::optional<double> mean_codebleu;
};

void to_json(nlohmann::json& j, const Overlap& o);

// Pairs every mutant of ours with every mutant of theirs derived from the
// same method.
Overlap cross_dataset_overlap(const std::vector<DatasetMutant>& ours, const std::vector<DatasetMutant>& theirs,
                              std::string_view language = "java");

struct EmOverlap {
  std::string other_dataset_id;
  int em = 0;
};

struct CodeBleuOverlap {
  std::string other_dataset_id;
  double score = 0.0;
};

struct MetricsRecord {
  std::string mutant_id;
  int si = 0;
  bool deletion_only = false;
  std::size_t ed = 0;
  std::vector<EmOverlap> em_overlaps;
  std::vector<CodeBleuOverlap> codebleu_overlaps;
};

void to_json(nlohmann::json& j, const MetricsRecord& r);
void from_json(const nlohmann::json& j, MetricsRecord& r);

struct OtherDataset {
  std::string id;
  std::vector<DatasetMutant> mutants;
};

// Metrics of one mutant of `original`. Overlap entries are added for every
// other dataset with mutants of the same method: em = any exact match,
// score = mean CodeBLEU over the pairs.
MetricsRecord compute_metrics(const std::string& mutant_id, const frontend::MethodRecord& original,
                              const std::string& mutant_text, const std::vector<frontend::StatementDiff>& diff,
                              const std::vector<OtherDataset>& others = {}, std::string_view language = "java");

}  // namespace lasmut::metrics
