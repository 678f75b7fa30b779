#include "lasmut/attention/analyzer.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "lasmut/kernels/kernels.hpp"
#include "lasmut/util/error.hpp"

namespace lasmut::attention {

using nlohmann::json;

Percent::Percent(int value) : value_(value) {
  if (value < 1 || value > 100) throw ConfigError("k must be in [1, 100], got " + std::to_string(value));
}

std::vector<std::optional<int>> align_subtokens(const frontend::MethodRecord& method,
                                                const AttentionBundle& bundle) {
  const std::string text = method.text();
  const std::size_t base = method.body_offset();
  std::vector<std::optional<int>> out(bundle.n());
  for (std::size_t i = 0; i < bundle.n(); ++i) {
    const Subtoken& t = bundle.subtokens[i];
    if (t.special) continue;
    if (t.end > text.size() || t.start > t.end) {
      throw ShapeError("subtoken " + std::to_string(i) + " lies outside the method text");
    }
    std::size_t p = t.start;
    while (p < t.end && std::isspace(static_cast<unsigned char>(text[p]))) ++p;
    if (p == t.end) p = t.start;
    if (p < base) continue;
    const std::size_t body_pos = p - base;
    // statements are sorted by start and non-overlapping
    auto it = std::upper_bound(method.statements.begin(), method.statements.end(), body_pos,
                               [](std::size_t pos, const frontend::StatementSpan& s) { return pos < s.start; });
    if (it == method.statements.begin()) continue;
    --it;
    if (body_pos < it->end) out[i] = it->index;
  }
  return out;
}

std::vector<TokenWeight> token_weights(const AttentionBundle& bundle,
                                       const std::vector<std::optional<int>>& alignment) {
  const std::size_t n = bundle.n();
  if (n == 0 || bundle.matrix.size() != n * n) throw ShapeError("attention matrix shape does not match subtokens");
  if (!alignment.empty() && alignment.size() != n) throw ShapeError("alignment size does not match subtokens");
  std::vector<double> sums(n);
  kernels::column_sums(bundle.matrix, n, n, sums);
  std::vector<TokenWeight> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    out[j].subtoken_index = static_cast<int>(j);
    out[j].weight = sums[j] / static_cast<double>(n);
    out[j].special = bundle.subtokens[j].special;
    if (!alignment.empty() && !out[j].special) out[j].statement_index = alignment[j];
  }
  return out;
}

std::vector<int> select_lat(const std::vector<TokenWeight>& weights, Percent k) {
  std::vector<int> eligible;
  for (const auto& w : weights) {
    if (w.eligible()) eligible.push_back(w.subtoken_index);
  }
  if (eligible.empty()) throw Error("no eligible subtokens for least-attended selection");
  std::vector<double> weight_of(weights.size());
  for (const auto& w : weights) weight_of[static_cast<std::size_t>(w.subtoken_index)] = w.weight;
  std::stable_sort(eligible.begin(), eligible.end(), [&](int a, int b) {
    return weight_of[static_cast<std::size_t>(a)] < weight_of[static_cast<std::size_t>(b)];
  });
  eligible.resize(k.of(eligible.size()));
  return eligible;
}

std::vector<StatementScore> score_statements(std::size_t statement_count, const std::vector<int>& lat,
                                             const std::vector<TokenWeight>& weights,
                                             std::vector<std::string>* diagnostics) {
  std::vector<StatementScore> scores(statement_count);
  for (std::size_t i = 0; i < statement_count; ++i) scores[i].statement_index = static_cast<int>(i);
  std::vector<bool> in_lat(weights.size(), false);
  for (int t : lat) {
    if (t < 0 || static_cast<std::size_t>(t) >= weights.size()) throw Error("LAT index out of range");
    in_lat[static_cast<std::size_t>(t)] = true;
  }
  for (const auto& w : weights) {
    if (!w.eligible()) continue;
    const auto s = static_cast<std::size_t>(*w.statement_index);
    if (s >= statement_count) throw ShapeError("subtoken aligned to unknown statement");
    scores[s].aligned_tokens += 1;
    if (in_lat[static_cast<std::size_t>(w.subtoken_index)]) scores[s].lat_tokens += 1;
  }
  for (auto& sc : scores) {
    if (sc.aligned_tokens == 0) {
      sc.score = 0.0;
      if (diagnostics) {
        diagnostics->push_back("statement " + std::to_string(sc.statement_index) + " has no aligned subtokens");
      }
    } else {
      sc.score = static_cast<double>(sc.lat_tokens) / static_cast<double>(sc.aligned_tokens);
    }
  }
  return scores;
}

std::vector<StatementScore> score_statements(const frontend::MethodRecord& method, const std::vector<int>& lat,
                                             const AttentionBundle& bundle, std::vector<std::string>* diagnostics) {
  const auto weights = token_weights(bundle, align_subtokens(method, bundle));
  return score_statements(method.statements.size(), lat, weights, diagnostics);
}

std::vector<int> select_las(const std::vector<StatementScore>& scores, Percent k) {
  if (scores.empty()) throw Error("no statements to select from");
  std::vector<const StatementScore*> order;
  for (const auto& s : scores) order.push_back(&s);
  std::stable_sort(order.begin(), order.end(), [](const StatementScore* a, const StatementScore* b) {
    if (a->score != b->score) return a->score > b->score;
    return a->statement_index < b->statement_index;
  });
  std::vector<int> out;
  const std::size_t take = k.of(scores.size());
  for (std::size_t i = 0; i < take; ++i) out.push_back(order[i]->statement_index);
  return out;
}

LasReport analyze(const frontend::MethodRecord& method, const AttentionBundle& bundle, Percent k) {
  LasReport r;
  r.method_id = method.id;
  r.k = k.value();
  if (method.statements.empty()) throw Error("method " + method.id + " has no statements");
  const auto weights = token_weights(bundle, align_subtokens(method, bundle));
  r.n_eligible = static_cast<std::size_t>(
      std::count_if(weights.begin(), weights.end(), [](const TokenWeight& w) { return w.eligible(); }));
  r.lat = select_lat(weights, k);
  r.statement_scores = score_statements(method.statements.size(), r.lat, weights, &r.diagnostics);
  r.las = select_las(r.statement_scores, k);
  std::sort(r.lat.begin(), r.lat.end());
  return r;
}

void to_json(json& j, const LasReport& r) {
  json scores = json::array();
  for (const auto& s : r.statement_scores) {
    scores.push_back({{"statement_index", s.statement_index},
                      {"score", s.score},
                      {"lat_tokens", s.lat_tokens},
                      {"aligned_tokens", s.aligned_tokens}});
  }
  j = json{{"method_id", r.method_id},
           {"k", r.k},
           {"lat", r.lat},
           {"statement_scores", scores},
           {"las", r.las},
           {"n_eligible", r.n_eligible},
           {"divergence", "las_highest_score"},
           {"diagnostics", r.diagnostics}};
}

void from_json(const json& j, LasReport& r) {
  j.at("method_id").get_to(r.method_id);
  j.at("k").get_to(r.k);
  j.at("lat").get_to(r.lat);
  j.at("las").get_to(r.las);
  r.n_eligible = j.value("n_eligible", std::size_t{0});
  r.statement_scores.clear();
  for (const auto& s : j.at("statement_scores")) {
    r.statement_scores.push_back(StatementScore{s.at("statement_index").get<int>(), s.at("score").get<double>(),
                                                s.value("lat_tokens", 0), s.value("aligned_tokens", 0)});
  }
  r.diagnostics = j.value("diagnostics", std::vector<std::string>{});
}

}  // namespace lasmut::attention
