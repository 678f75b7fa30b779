#include "lasmut/metrics/metrics.hpp"

#include <set>

namespace lasmut::metrics {

using nlohmann::json;

int statements_involved(const std::vector<frontend::StatementDiff>& diff) {
  std::set<int> original;
  std::set<int> added;
  for (const auto& d : diff) {
    if (d.kind == frontend::DiffKind::added) {
      added.insert(*d.mutant);
    } else {
      original.insert(*d.original);
    }
  }
  return static_cast<int>(original.size() + added.size());
}

bool deletion_only(const std::vector<frontend::StatementDiff>& diff, const frontend::MethodRecord&,
                   const frontend::MethodRecord& mutant, std::string_view language) {
  if (diff.empty()) return false;
  const auto& fe = frontend::frontend_for(language);
  for (const auto& d : diff) {
    if (d.kind == frontend::DiffKind::removed) continue;
    if (d.kind == frontend::DiffKind::added) return false;
    const auto& text = mutant.statements.at(static_cast<std::size_t>(*d.mutant)).text;
    if (!fe.tokenize(text).empty()) return false;
  }
  return true;
}

namespace {

std::string normalize_newlines(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\r') {
      out.push_back('\n');
      if (i + 1 < s.size() && s[i + 1] == '\n') ++i;
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

}  // namespace

int exact_match(std::string_view a, std::string_view b) {
  return normalize_newlines(a) == normalize_newlines(b) ? 1 : 0;
}

void to_json(json& j, const Overlap& o) {
  j = json{{"pairs", o.pairs},
           {"ours_paired", o.ours_paired},
           {"em_rate", o.em_rate ? json(*o.em_rate) : json(nullptr)},
           {"mean_codebleu", o.mean_codebleu ? json(*o.mean_codebleu) : json(nullptr)}};
}

Overlap cross_dataset_overlap(const std::vector<DatasetMutant>& ours, const std::vector<DatasetMutant>& theirs,
                              std::string_view language) {
  Overlap o;
  std::size_t matched = 0;
  double cb_sum = 0.0;
  for (const auto& a : ours) {
    bool paired = false;
    bool em = false;
    for (const auto& b : theirs) {
      if (a.method_key != b.method_key) continue;
      paired = true;
      ++o.pairs;
      em = em || exact_match(a.text, b.text) == 1;
      cb_sum += codebleu(a.text, b.text, language).score;
    }
    if (paired) ++o.ours_paired;
    if (em) ++matched;
  }
  if (o.pairs > 0) {
    o.em_rate = static_cast<double>(matched) / static_cast<double>(o.ours_paired);
    o.mean_codebleu = cb_sum / static_cast<double>(o.pairs);
  }
  return o;
}

void to_json(json& j, const MetricsRecord& r) {
  json em = json::array();
  for (const auto& e : r.em_overlaps) em.push_back({{"other_dataset_id", e.other_dataset_id}, {"em", e.em}});
  json cb = json::array();
  for (const auto& c : r.codebleu_overlaps) {
    cb.push_back({{"other_dataset_id", c.other_dataset_id}, {"score", c.score}});
  }
  j = json{{"mutant_id", r.mutant_id}, {"si", r.si},           {"deletion_only", r.deletion_only},
           {"ed", r.ed},               {"em_overlaps", em},    {"codebleu_overlaps", cb}};
}

void from_json(const json& j, MetricsRecord& r) {
  j.at("mutant_id").get_to(r.mutant_id);
  j.at("si").get_to(r.si);
  j.at("deletion_only").get_to(r.deletion_only);
  j.at("ed").get_to(r.ed);
  r.em_overlaps.clear();
  for (const auto& e : j.value("em_overlaps", json::array())) {
    r.em_overlaps.push_back({e.at("other_dataset_id").get<std::string>(), e.at("em").get<int>()});
  }
  r.codebleu_overlaps.clear();
  for (const auto& c : j.value("codebleu_overlaps", json::array())) {
    r.codebleu_overlaps.push_back({c.at("other_dataset_id").get<std::string>(), c.at("score").get<double>()});
  }
}

MetricsRecord compute_metrics(const std::string& mutant_id, const frontend::MethodRecord& original,
                              const std::string& mutant_text, const std::vector<frontend::StatementDiff>& diff,
                              const std::vector<OtherDataset>& others, std::string_view language) {
  const auto& fe = frontend::frontend_for(language);
  MetricsRecord r;
  r.mutant_id = mutant_id;
  r.si = statements_involved(diff);
  r.deletion_only = deletion_only(diff, original, fe.parse_method(mutant_text), language);
  r.ed = levenshtein(original.text(), mutant_text);
  for (const auto& other : others) {
    std::size_t pairs = 0;
    int em = 0;
    double sum = 0.0;
    for (const auto& m : other.mutants) {
      if (m.method_key != original.id) continue;
      ++pairs;
      em = std::max(em, exact_match(mutant_text, m.text));
      sum += codebleu(mutant_text, m.text, language).score;
    }
    if (pairs == 0) continue;
    r.em_overlaps.push_back({other.id, em});
    r.codebleu_overlaps.push_back({other.id, sum / static_cast<double>(pairs)});
  }
  return r;
}

}  // namespace lasmut::metrics
