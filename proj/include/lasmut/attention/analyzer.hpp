#pragma once
// Least-attended token (LAT) and statement (LAS) selection.
//
// Pipeline per method:
//   token_weights    column means of the aggregated attention matrix
//   select_lat       the ceil(k% * n_eligible) lowest-weight eligible subtokens
//   score_statements |LAT tokens in s| / |aligned tokens in s|
//   select_las       the ceil(k% * |statements|) highest-scoring statements
//
// A subtoken is eligible for LAT when it is not special and lies inside a
// statement span. Both sorts break ties by ascending index.

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lasmut/attention/bundle.hpp"
#include "lasmut/frontend/method.hpp"

namespace lasmut::attention {

// Integer percentage threshold in [1, 100].
class Percent {
 public:
  explicit Percent(int value);
  int value() const { return value_; }
  // ceil(value/100 * n), computed exactly.
  std::size_t of(std::size_t n) const { return (static_cast<std::size_t>(value_) * n + 99) / 100; }

  friend bool operator==(Percent, Percent) = default;

 private:
  int value_;
};

inline constexpr int kDefaultK = 10;

struct TokenWeight {
  int subtoken_index = 0;
  double weight = 0.0;
  std::optional<int> statement_index;
  bool special = false;

  bool eligible() const { return !special && statement_index.has_value(); }
};

struct StatementScore {
  int statement_index = 0;
  double score = 0.0;
  int lat_tokens = 0;
  int aligned_tokens = 0;
};

struct LasReport {
  std::string method_id;
  int k = kDefaultK;
  std::vector<int> lat;  // ascending subtoken indices
  std::vector<StatementScore> statement_scores;
  std::vector<int> las;  // selection order: highest score first
  std::size_t n_eligible = 0;
  std::vector<std::string> diagnostics;
};

// Statement index for every subtoken of `bundle` (nullopt for special or
// unaligned subtokens). A subtoken belongs to the statement whose span holds
// its first non-whitespace character. Throws ShapeError on out-of-range spans.
std::vector<std::optional<int>> align_subtokens(const frontend::MethodRecord& method,
                                                const AttentionBundle& bundle);

// Column means over all rows. `alignment` may be empty (no statement info).
// Throws ShapeError on a malformed matrix.
std::vector<TokenWeight> token_weights(const AttentionBundle& bundle,
                                       const std::vector<std::optional<int>>& alignment = {});

// Selected eligible subtoken indices in ascending (weight, index) order.
// Throws Error when no subtoken is eligible.
std::vector<int> select_lat(const std::vector<TokenWeight>& weights, Percent k);

std::vector<StatementScore> score_statements(const frontend::MethodRecord& method, const std::vector<int>& lat,
                                             const AttentionBundle& bundle,
                                             std::vector<std::string>* diagnostics = nullptr);

// Same scoring from a precomputed alignment.
std::vector<StatementScore> score_statements(std::size_t statement_count, const std::vector<int>& lat,
                                             const std::vector<TokenWeight>& weights,
                                             std::vector<std::string>* diagnostics = nullptr);

std::vector<int> select_las(const std::vector<StatementScore>& scores, Percent k);

// All four steps. Deterministic for identical inputs.
LasReport analyze(const frontend::MethodRecord& method, const AttentionBundle& bundle, Percent k);

void to_json(nlohmann::json& j, const LasReport& r);
void from_json(const nlohmann::json& j, LasReport& r);

}  // namespace lasmut::attention
