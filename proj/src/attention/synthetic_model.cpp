#include "lasmut/attention/synthetic_model.hpp"

#include <cctype>
#include <cmath>

#include "lasmut/frontend/token.hpp"
#include "lasmut/kernels/kernels.hpp"
#include "lasmut/util/error.hpp"

namespace lasmut::attention {

namespace {

using frontend::TokenKind;

enum class Sal { keyword, identifier, op, literal, punctuation, special };

double salience(Sal s) {
  switch (s) {
    case Sal::keyword:
      return 1.0;
    case Sal::identifier:
      return 1.6;
    case Sal::op:
      return 0.7;
    case Sal::literal:
      return 0.45;
    case Sal::punctuation:
      return 0.25;
    case Sal::special:
      return 3.0;
  }
  return 1.0;
}

Sal sal_of(TokenKind k) {
  switch (k) {
    case TokenKind::keyword:
      return Sal::keyword;
    case TokenKind::identifier:
      return Sal::identifier;
    case TokenKind::op:
      return Sal::op;
    case TokenKind::literal:
      return Sal::literal;
    case TokenKind::punctuation:
      return Sal::punctuation;
  }
  return Sal::punctuation;
}

enum class CharClass { upper, lower, digit, underscore, other };

CharClass classify(char c) {
  const auto u = static_cast<unsigned char>(c);
  if (std::isupper(u)) return CharClass::upper;
  if (std::islower(u)) return CharClass::lower;
  if (std::isdigit(u)) return CharClass::digit;
  if (c == '_') return CharClass::underscore;
  return CharClass::other;
}

// Split points of an identifier: "parseHTTPResponse2" -> parse|HTTP|Response|2.
std::vector<std::size_t> identifier_cuts(std::string_view id) {
  std::vector<std::size_t> cuts{0};
  for (std::size_t i = 1; i < id.size(); ++i) {
    const CharClass prev = classify(id[i - 1]);
    const CharClass cur = classify(id[i]);
    bool cut = false;
    if (cur == CharClass::underscore || prev == CharClass::underscore) {
      cut = true;
    } else if ((cur == CharClass::digit) != (prev == CharClass::digit)) {
      cut = true;
    } else if (prev == CharClass::lower && cur == CharClass::upper) {
      cut = true;
    } else if (prev == CharClass::upper && cur == CharClass::upper && i + 1 < id.size() &&
               classify(id[i + 1]) == CharClass::lower) {
      cut = true;
    }
    if (cut) cuts.push_back(i);
  }
  cuts.push_back(id.size());
  return cuts;
}

struct Piece {
  Subtoken token;
  Sal sal;
};

std::vector<Piece> pieces(std::string_view text) {
  std::vector<Piece> out;
  out.push_back({Subtoken{"<s>", 0, 0, true}, Sal::special});
  for (const auto& t : frontend::lex_java(text).tokens) {
    if (t.kind != TokenKind::identifier) {
      out.push_back({Subtoken{t.text, t.start, t.end, false}, sal_of(t.kind)});
      continue;
    }
    const auto cuts = identifier_cuts(t.text);
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      out.push_back({Subtoken{t.text.substr(cuts[c], cuts[c + 1] - cuts[c]), t.start + cuts[c],
                              t.start + cuts[c + 1], false},
                     Sal::identifier});
    }
  }
  out.push_back({Subtoken{"</s>", text.size(), text.size(), true}, Sal::special});
  return out;
}

}  // namespace

std::vector<Subtoken> synthetic_subtokens(std::string_view method_text) {
  std::vector<Subtoken> out;
  for (auto& p : pieces(method_text)) out.push_back(std::move(p.token));
  return out;
}

AttentionBundle synthetic_attention(std::string_view method_text, const SyntheticModelOptions& options) {
  if (method_text.empty()) throw Error("cannot compute attention for empty method text");
  if (options.head_taus.empty()) throw ConfigError("synthetic model needs at least one head");
  if (options.max_subtokens < 3) throw ConfigError("synthetic model context must hold at least 3 subtokens");
  auto ps = pieces(method_text);

  AttentionBundle b;
  b.model_id = std::string(kSyntheticModelId);
  b.num_layers = options.num_layers;
  b.num_heads = static_cast<int>(options.head_taus.size());
  b.aggregated = true;
  if (ps.size() > options.max_subtokens) {
    b.truncated_from = ps.size();
    Piece end = ps.back();
    ps.resize(options.max_subtokens - 1);
    end.token.start = end.token.end = ps.back().token.end;
    ps.push_back(end);
  }
  const std::size_t n = ps.size();
  std::vector<double> sal(n);
  for (std::size_t j = 0; j < n; ++j) sal[j] = salience(ps[j].sal);

  b.matrix.assign(n * n, 0.0);
  std::vector<double> head(n * n);
  std::vector<double> decay(n);
  std::vector<double> inv(n);
  for (double tau : options.head_taus) {
    for (std::size_t d = 0; d < n; ++d) decay[d] = std::exp(-static_cast<double>(d) / tau);
    for (std::size_t i = 0; i < n; ++i) {
      double* row = &head[i * n];
      double sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        row[j] = sal[j] * decay[i > j ? i - j : j - i];
        sum += row[j];
      }
      inv[i] = 1.0 / sum;
    }
    kernels::scale_rows(head, n, n, inv);
    for (std::size_t x = 0; x < n * n; ++x) b.matrix[x] += head[x];
  }
  const double h = static_cast<double>(options.head_taus.size());
  for (double& v : b.matrix) v /= h;
  for (auto& p : ps) b.subtokens.push_back(std::move(p.token));
  return b;
}

}  // namespace lasmut::attention
