#pragma once
// CodeBLEU-style similarity between two method texts.
//
//   score = 0.25 ngram + 0.25 weighted_ngram + 0.25 ast + 0.25 dataflow
//
// The variant here is symmetric in its arguments:
//   ngram           geometric mean over orders 1..max_order of
//                   |A_n ∩ B_n| / max(|A_n|, |B_n|) (multisets of n-grams)
//   weighted_ngram  unigram overlap with keywords weighted keyword_weight
//   ast             Dice coefficient over multisets of subtree shapes
//   dataflow        mean of both directional recalls of def-use edges, with
//                   variables renamed by first appearance
// When either text does not parse, only the ngram component is computed and
// the result is flagged degraded.

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lasmut/frontend/token.hpp"

namespace lasmut::metrics {

struct CodeBleuOptions {
  int max_order = 4;
  double keyword_weight = 5.0;
};

struct CodeBleuScore {
  double score = 0.0;
  double ngram = 0.0;
  double weighted_ngram = 0.0;
  double ast = 0.0;
  double dataflow = 0.0;
  bool degraded = false;
};

void to_json(nlohmann::json& j, const CodeBleuScore& s);

CodeBleuScore codebleu(std::string_view a, std::string_view b, std::string_view language = "java",
                       const CodeBleuOptions& options = {});

// Components, exposed for testing.
double ngram_match(const std::vector<std::string>& a, const std::vector<std::string>& b, int max_order);
double weighted_unigram_match(const std::vector<frontend::SourceToken>& a,
                              const std::vector<frontend::SourceToken>& b, double keyword_weight);

}  // namespace lasmut::metrics
