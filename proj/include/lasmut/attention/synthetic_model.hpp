#pragma once
// Deterministic stand-in for a transformer code model.
//
// Subtokens come from the Java lexer, with identifiers split at camelCase,
// underscore and digit boundaries, wrapped in <s> ... </s>. Each head attends
// with weight salience(kind of j) * exp(-|i - j| / tau_h); rows are normalized
// per head and the heads are averaged. The matrix depends only on the sequence
// of subtoken kinds: renaming an identifier into the same number of pieces, or
// changing a literal, leaves it unchanged.

#include <cstddef>
#include <string_view>
#include <vector>

#include "lasmut/attention/bundle.hpp"

namespace lasmut::attention {

inline constexpr std::string_view kSyntheticModelId = "synthetic-v1";

struct SyntheticModelOptions {
  std::vector<double> head_taus{2.0, 6.0, 12.0, 24.0};
  int num_layers = 1;
  std::size_t max_subtokens = 2048;  // context length, specials included
};

// Subtokens of `method_text`, specials included, before truncation.
// Throws ParseError when the text does not lex.
std::vector<Subtoken> synthetic_subtokens(std::string_view method_text);

AttentionBundle synthetic_attention(std::string_view method_text, const SyntheticModelOptions& options = {});

}  // namespace lasmut::attention
