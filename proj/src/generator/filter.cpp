#include "lasmut/generator/filter.hpp"

#include <algorithm>

#include "lasmut/util/error.hpp"

namespace lasmut::generator {

using nlohmann::json;

std::string_view status_name(CandidateStatus s) {
  switch (s) {
    case CandidateStatus::raw:
      return "raw";
    case CandidateStatus::rejected_unparseable:
      return "rejected_unparseable";
    case CandidateStatus::rejected_attention:
      return "rejected_attention";
    case CandidateStatus::accepted:
      return "accepted";
  }
  return "raw";
}

CandidateStatus status_from_name(std::string_view name) {
  for (auto s : {CandidateStatus::raw, CandidateStatus::rejected_unparseable, CandidateStatus::rejected_attention,
                 CandidateStatus::accepted}) {
    if (status_name(s) == name) return s;
  }
  throw Error("unknown candidate status '" + std::string(name) + "'");
}

void MutantCandidate::settle(CandidateStatus next) {
  if (status_ != CandidateStatus::raw || next == CandidateStatus::raw) {
    throw Error("candidate " + mutant_id() + " cannot move from " + std::string(status_name(status_)) + " to " +
                std::string(status_name(next)));
  }
  status_ = next;
}

void to_json(json& j, const MutantCandidate& c) {
  j = json{{"mutant_id", c.mutant_id()},
           {"method_id", c.method_id},
           {"variant_ordinal", c.variant_ordinal},
           {"text", c.text},
           {"status", status_name(c.status())},
           {"diff", c.diff},
           {"provenance",
            {{"provider_id", c.provenance.provider_id},
             {"request_id", c.provenance.request_id},
             {"temperature", c.provenance.temperature}}},
           {"notes", c.notes}};
  if (c.new_las) j["new_las"] = *c.new_las;
}

void from_json(const json& j, MutantCandidate& c) {
  j.at("method_id").get_to(c.method_id);
  j.at("variant_ordinal").get_to(c.variant_ordinal);
  j.at("text").get_to(c.text);
  c.status_ = status_from_name(j.at("status").get<std::string>());
  c.diff = j.value("diff", std::vector<frontend::StatementDiff>{});
  const auto& p = j.at("provenance");
  c.provenance = {p.value("provider_id", ""), p.value("request_id", ""), p.value("temperature", 0.0)};
  c.notes = j.value("notes", std::vector<std::string>{});
  if (j.contains("new_las")) c.new_las = j.at("new_las").get<std::vector<int>>();
}

void to_json(json& j, const RetryEntry& e) {
  j = json{{"mutant_id", e.mutant_id}, {"reason", e.reason}, {"method", e.mutant}};
}

std::size_t FilterResult::accepted() const {
  return static_cast<std::size_t>(std::count_if(candidates.begin(), candidates.end(), [](const MutantCandidate& c) {
    return c.status() == CandidateStatus::accepted;
  }));
}

namespace {

bool contains(const std::vector<int>& xs, int x) { return std::find(xs.begin(), xs.end(), x) != xs.end(); }

std::string join(const std::vector<int>& xs) {
  std::string out;
  for (int x : xs) out += (out.empty() ? "" : ",") + std::to_string(x);
  return out;
}

}  // namespace

FilterResult filter_candidates(const frontend::MethodRecord& method, const attention::LasReport& original,
                               const std::vector<std::string>& texts, const attention::AttentionSource& source,
                               attention::Percent k, int max_accepted, const Provenance& provenance,
                               int first_ordinal, std::string_view language) {
  const auto& fe = frontend::frontend_for(language);
  const std::string original_signature = fe.normalize_statement(method.signature);
  FilterResult out;
  int accepted = 0;
  for (std::size_t v = 0; v < texts.size(); ++v) {
    MutantCandidate c;
    c.method_id = method.id;
    c.variant_ordinal = first_ordinal + static_cast<int>(v);
    c.text = texts[v];
    c.provenance = provenance;

    if (!fe.is_parseable(c.text)) {
      c.settle(CandidateStatus::rejected_unparseable);
      out.candidates.push_back(std::move(c));
      continue;
    }
    frontend::MethodRecord mutant = fe.parse_method(c.text);
    mutant.id = c.mutant_id();
    mutant.file = method.file;
    c.diff = frontend::diff_statements(method, mutant, language);

    if (fe.normalize_statement(mutant.signature) != original_signature) {
      c.notes.push_back("signature changed");
      c.settle(CandidateStatus::rejected_attention);
    } else if (c.diff.empty()) {
      c.notes.push_back("no-op");
      c.settle(CandidateStatus::rejected_attention);
    } else if (auto bundle = source.lookup(mutant); !bundle) {
      c.notes.push_back("attention unavailable, queued for retry");
      out.retry_queue.push_back(RetryEntry{c.mutant_id(), mutant, "no attention dump for candidate"});
    } else {
      const auto report = attention::analyze(mutant, *bundle, k);
      c.new_las = report.las;
      std::vector<int> outside;
      std::vector<int> removed_outside;
      for (const auto& d : c.diff) {
        if (d.kind == frontend::DiffKind::removed) {
          if (!contains(original.las, *d.original)) removed_outside.push_back(*d.original);
        } else if (!contains(report.las, *d.mutant)) {
          outside.push_back(*d.mutant);
        }
      }
      if (!outside.empty()) c.notes.push_back("changed statements outside new LAS: " + join(outside));
      if (!removed_outside.empty()) c.notes.push_back("removed statements outside LAS: " + join(removed_outside));
      if (!outside.empty() || !removed_outside.empty()) {
        c.settle(CandidateStatus::rejected_attention);
      } else if (accepted >= max_accepted) {
        c.notes.push_back("more than " + std::to_string(max_accepted) + " variants");
        c.settle(CandidateStatus::rejected_attention);
      } else {
        c.settle(CandidateStatus::accepted);
        ++accepted;
      }
    }
    out.candidates.push_back(std::move(c));
  }
  return out;
}

}  // namespace lasmut::generator
