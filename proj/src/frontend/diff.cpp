#include <vector>

#include "lasmut/frontend/frontend.hpp"
#include "lasmut/util/error.hpp"

namespace lasmut::frontend {

std::string_view diff_kind_name(DiffKind kind) {
  switch (kind) {
    case DiffKind::added:
      return "added";
    case DiffKind::removed:
      return "removed";
    case DiffKind::modified:
      return "modified";
  }
  return "modified";
}

void to_json(nlohmann::json& j, const StatementDiff& d) {
  j = nlohmann::json{{"kind", diff_kind_name(d.kind)}};
  j["original"] = d.original ? nlohmann::json(*d.original) : nlohmann::json(nullptr);
  j["mutant"] = d.mutant ? nlohmann::json(*d.mutant) : nlohmann::json(nullptr);
}

void from_json(const nlohmann::json& j, StatementDiff& d) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "added") {
    d.kind = DiffKind::added;
  } else if (kind == "removed") {
    d.kind = DiffKind::removed;
  } else if (kind == "modified") {
    d.kind = DiffKind::modified;
  } else {
    throw Error("unknown diff kind: " + kind);
  }
  d.original = j.contains("original") && !j["original"].is_null() ? std::optional<int>(j["original"].get<int>())
                                                                   : std::nullopt;
  d.mutant = j.contains("mutant") && !j["mutant"].is_null() ? std::optional<int>(j["mutant"].get<int>())
                                                             : std::nullopt;
}

std::vector<StatementDiff> diff_statements(const MethodRecord& original, const MethodRecord& mutant,
                                           std::string_view language) {
  const Frontend& fe = frontend_for(language);
  std::vector<std::string> a, b;
  for (const auto& s : original.statements) a.push_back(fe.normalize_statement(s.text));
  for (const auto& s : mutant.statements) b.push_back(fe.normalize_statement(s.text));

  // suffix LCS lengths
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::vector<int>> lcs(n + 1, std::vector<int>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      lcs[i][j] = a[i] == b[j] ? lcs[i + 1][j + 1] + 1 : std::max(lcs[i + 1][j], lcs[i][j + 1]);
    }
  }

  std::vector<StatementDiff> out;
  std::vector<int> removed, added;
  auto flush = [&] {
    // Within a gap, removals and additions pair up in order as modifications.
    const std::size_t paired = std::min(removed.size(), added.size());
    for (std::size_t k = 0; k < paired; ++k) out.push_back({DiffKind::modified, removed[k], added[k]});
    for (std::size_t k = paired; k < removed.size(); ++k) out.push_back({DiffKind::removed, removed[k], std::nullopt});
    for (std::size_t k = paired; k < added.size(); ++k) out.push_back({DiffKind::added, std::nullopt, added[k]});
    removed.clear();
    added.clear();
  };
  std::size_t i = 0, j = 0;
  while (i < n || j < m) {
    if (i < n && j < m && a[i] == b[j]) {
      flush();
      ++i;
      ++j;
    } else if (j == m || (i < n && lcs[i + 1][j] >= lcs[i][j + 1])) {
      removed.push_back(static_cast<int>(i++));
    } else {
      added.push_back(static_cast<int>(j++));
    }
  }
  flush();
  return out;
}

std::vector<StatementDiff> diff_statements(const MethodRecord& original, std::string_view mutant_text,
                                           std::string_view language) {
  const MethodRecord mutant = frontend_for(language).parse_method(mutant_text);
  return diff_statements(original, mutant, language);
}

}  // namespace lasmut::frontend
