#pragma once
// Helpers shared by the unit tests and the acceptance binary: fixture paths,
// scratch directories, random attention instances and the brute-force
// reference implementations the library is checked against.

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <unistd.h>

#include "lasmut/attention/analyzer.hpp"
#include "lasmut/attention/bundle.hpp"
#include "lasmut/frontend/method.hpp"

namespace lasmut::testing {

namespace fs = std::filesystem;

inline fs::path fixture(const std::string& rel) { return fs::path(LASMUT_FIXTURES) / rel; }

inline fs::path cli_path() { return fs::path(LASMUT_CLI); }

// A fresh directory removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag = "t") {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("lasmut-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  fs::path path_;
};

// A method with `statements` one-line statements "sI = I;" and the attention
// bundle for it. Subtoken layout: <s>, then for each statement its subtokens,
// then </s>. Statement i gets per_statement[i] subtokens, all inside its span.
struct Instance {
  frontend::MethodRecord method;
  attention::AttentionBundle bundle;
};

inline Instance make_instance(const std::vector<int>& per_statement, const std::vector<double>& matrix,
                              bool with_specials = true) {
  Instance inst;
  auto& m = inst.method;
  m.id = "fixture::T.m#0";
  m.signature = "void m()";
  std::string body = "{\n";
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  for (std::size_t i = 0; i < per_statement.size(); ++i) {
    body += "  ";
    const std::size_t start = body.size();
    // One letter per subtoken so each subtoken has a one-character span.
    std::string stmt(static_cast<std::size_t>(std::max(per_statement[i], 1)), 'a');
    stmt += ';';
    body += stmt;
    spans.emplace_back(start, body.size());
    m.statements.push_back({static_cast<int>(i), start, body.size(), stmt});
    body += "\n";
  }
  body += "}";
  m.body = body;

  auto& b = inst.bundle;
  b.model_id = "fixture";
  b.num_layers = 1;
  b.num_heads = 1;
  const std::size_t off = m.body_offset();
  if (with_specials) b.subtokens.push_back({"<s>", 0, 0, true});
  for (std::size_t i = 0; i < per_statement.size(); ++i) {
    for (int t = 0; t < per_statement[i]; ++t) {
      const std::size_t p = off + spans[i].first + static_cast<std::size_t>(t);
      b.subtokens.push_back({"a", p, p + 1, false});
    }
  }
  const std::size_t len = m.text().size();
  if (with_specials) b.subtokens.push_back({"</s>", len, len, true});
  b.matrix = matrix;
  return inst;
}

inline std::vector<double> random_row_stochastic(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> m(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0;
    for (std::size_t j = 0; j < n; ++j) s += (m[i * n + j] = u(rng) + 1e-6);
    for (std::size_t j = 0; j < n; ++j) m[i * n + j] /= s;
  }
  return m;
}

// Random instance with 1..max_statements statements and 1..max_subtokens
// subtokens in total (specials included), each statement at least one.
inline Instance random_instance(std::mt19937_64& rng, int max_subtokens, int max_statements) {
  std::uniform_int_distribution<int> ns(1, max_statements);
  const int statements = ns(rng);
  const int content_max = std::max(statements, max_subtokens - 2);
  std::uniform_int_distribution<int> nc(statements, content_max);
  const int content = nc(rng);
  std::vector<int> per(static_cast<std::size_t>(statements), 1);
  std::uniform_int_distribution<int> pick(0, statements - 1);
  for (int extra = content - statements; extra > 0; --extra) per[static_cast<std::size_t>(pick(rng))] += 1;
  const std::size_t n = static_cast<std::size_t>(content) + 2;
  return make_instance(per, random_row_stochastic(n, rng));
}

// ---- brute-force reference for the LAT/LAS selection -----------------------

struct OracleResult {
  std::vector<int> lat;  // ascending
  std::vector<int> las;  // selection order
};

inline std::size_t ceil_pct(int k, std::size_t n) {
  // Plain floating-point ceiling, checked against the integer form elsewhere.
  const double exact = static_cast<double>(k) * static_cast<double>(n) / 100.0;
  std::size_t c = static_cast<std::size_t>(exact);
  if (static_cast<double>(c) < exact - 1e-12) ++c;
  return c;
}

// Enumerates every subset of eligible subtokens of the required size and keeps
// the one that is lexicographically smallest by sorted (weight, index) pairs;
// does the same for statements by (-score, index). Exponential, only for tiny
// instances.
inline OracleResult oracle_analyze(const frontend::MethodRecord& method, const attention::AttentionBundle& b,
                                   int k) {
  const std::size_t n = b.subtokens.size();
  // Column means, summed in row order.
  std::vector<double> w(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += b.matrix[i * n + j];
    w[j] = s / static_cast<double>(n);
  }
  // Statement of every subtoken by direct span containment.
  std::vector<std::optional<int>> stmt(n);
  const std::size_t off = method.body_offset();
  for (std::size_t j = 0; j < n; ++j) {
    if (b.subtokens[j].special) continue;
    for (const auto& s : method.statements) {
      if (b.subtokens[j].start >= off + s.start && b.subtokens[j].start < off + s.end) stmt[j] = s.index;
    }
  }
  std::vector<int> eligible;
  for (std::size_t j = 0; j < n; ++j) {
    if (stmt[j]) eligible.push_back(static_cast<int>(j));
  }
  const std::size_t want = ceil_pct(k, eligible.size());

  auto key_of = [&](const std::vector<int>& subset) {
    std::vector<std::pair<double, int>> key;
    for (int j : subset) key.emplace_back(w[static_cast<std::size_t>(j)], j);
    std::sort(key.begin(), key.end());
    return key;
  };
  // A subset is optimal when no outside element beats any inside element.
  std::optional<std::vector<int>> best;
  const std::size_t e = eligible.size();
  for (std::uint32_t mask = 0; mask < (1u << e); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != want) continue;
    std::vector<int> subset;
    for (std::size_t i = 0; i < e; ++i) {
      if (mask & (1u << i)) subset.push_back(eligible[i]);
    }
    bool dominated = false;
    for (std::size_t i = 0; i < e && !dominated; ++i) {
      if (mask & (1u << i)) continue;
      const auto out = std::make_pair(w[static_cast<std::size_t>(eligible[i])], eligible[i]);
      for (int in : subset) {
        if (out < std::make_pair(w[static_cast<std::size_t>(in)], in)) {
          dominated = true;
          break;
        }
      }
    }
    if (!dominated) {
      if (best && key_of(*best) != key_of(subset)) throw std::logic_error("oracle found two optimal LATs");
      best = subset;
    }
  }
  OracleResult r;
  r.lat = best.value_or(std::vector<int>{});
  std::sort(r.lat.begin(), r.lat.end());

  const std::size_t ns = method.statements.size();
  std::vector<double> score(ns, 0.0);
  for (std::size_t s = 0; s < ns; ++s) {
    int aligned = 0, hit = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (stmt[j] != static_cast<int>(s)) continue;
      ++aligned;
      if (std::binary_search(r.lat.begin(), r.lat.end(), static_cast<int>(j))) ++hit;
    }
    score[s] = aligned ? static_cast<double>(hit) / aligned : 0.0;
  }
  // Selection by repeated extraction of the best remaining statement.
  std::vector<bool> taken(ns, false);
  for (std::size_t round = 0; round < ceil_pct(k, ns); ++round) {
    int pick = -1;
    for (std::size_t s = 0; s < ns; ++s) {
      if (taken[s]) continue;
      if (pick < 0 || score[s] > score[static_cast<std::size_t>(pick)]) pick = static_cast<int>(s);
    }
    taken[static_cast<std::size_t>(pick)] = true;
    r.las.push_back(pick);
  }
  return r;
}

// Textbook full-matrix Levenshtein.
inline std::size_t reference_levenshtein(const std::string& a, const std::string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
  }
  return d[a.size()][b.size()];
}

}  // namespace lasmut::testing
