#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lasmut/attention/analyzer.hpp"
#include "lasmut/attention/source.hpp"
#include "lasmut/frontend/frontend.hpp"

namespace lasmut::generator {

enum class CandidateStatus { raw, rejected_unparseable, rejected_attention, accepted };

std::string_view status_name(CandidateStatus s);
CandidateStatus status_from_name(std::string_view name);

struct Provenance {
  std::string provider_id;
  std::string request_id;
  double temperature = 0.0;
};

struct MutantCandidate {
  std::string method_id;
  int variant_ordinal = 0;
  std::string text;
  std::vector<frontend::StatementDiff> diff;
  Provenance provenance;
  std::optional<std::vector<int>> new_las;
  std::vector<std::string> notes;

  CandidateStatus status() const { return status_; }
  // Moves a raw candidate to a final status; throws Error otherwise.
  void settle(CandidateStatus next);
  std::string mutant_id() const { return method_id + "~" + std::to_string(variant_ordinal); }

 private:
  CandidateStatus status_ = CandidateStatus::raw;
  friend void from_json(const nlohmann::json& j, MutantCandidate& c);
};

void to_json(nlohmann::json& j, const MutantCandidate& c);
void from_json(const nlohmann::json& j, MutantCandidate& c);

// A candidate whose attention could not be computed yet.
struct RetryEntry {
  std::string mutant_id;
  frontend::MethodRecord mutant;  // id set to mutant_id
  std::string reason;
};

void to_json(nlohmann::json& j, const RetryEntry& e);

struct FilterResult {
  std::vector<MutantCandidate> candidates;
  std::vector<RetryEntry> retry_queue;

  std::size_t accepted() const;
};

// Applies the parseability and attention-stability checks to `texts`, which
// all answer one prompt for `method`. At most `max_accepted` candidates are
// accepted; first_ordinal numbers the variants.
FilterResult filter_candidates(const frontend::MethodRecord& method, const attention::LasReport& original,
                               const std::vector<std::string>& texts, const attention::AttentionSource& source,
                               attention::Percent k, int max_accepted, const Provenance& provenance = {},
                               int first_ordinal = 0, std::string_view language = "java");

}  // namespace lasmut::generator
