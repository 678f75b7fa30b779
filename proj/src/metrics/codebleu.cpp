#include "lasmut/metrics/codebleu.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lasmut/frontend/frontend.hpp"
#include "lasmut/util/error.hpp"

namespace lasmut::metrics {

using frontend::Ast;
using frontend::NodeKind;
using nlohmann::json;

void to_json(json& j, const CodeBleuScore& s) {
  j = json{{"score", s.score},       {"ngram", s.ngram},       {"weighted_ngram", s.weighted_ngram},
           {"ast", s.ast},           {"dataflow", s.dataflow}, {"degraded", s.degraded}};
}

namespace {

template <typename K>
std::size_t multiset_intersection(const std::map<K, std::size_t>& a, const std::map<K, std::size_t>& b) {
  std::size_t n = 0;
  for (const auto& [k, c] : a) {
    const auto it = b.find(k);
    if (it != b.end()) n += std::min(c, it->second);
  }
  return n;
}

std::map<std::vector<std::string>, std::size_t> ngrams(const std::vector<std::string>& xs, std::size_t n) {
  std::map<std::vector<std::string>, std::size_t> out;
  for (std::size_t i = 0; i + n <= xs.size(); ++i) out[std::vector<std::string>(xs.begin() + i, xs.begin() + i + n)]++;
  return out;
}

// Shape of every subtree, keyed by an s-expression of node kinds.
void subtrees(const Ast& ast, int id, std::map<std::string, std::size_t>& out, std::string& shape) {
  const auto& n = ast.node(id);
  shape = "(";
  shape += frontend::node_kind_name(n.kind);
  for (int c : n.children) {
    std::string child;
    subtrees(ast, c, out, child);
    shape += ' ';
    shape += child;
  }
  shape += ')';
  out[shape]++;
}

struct DataflowExtractor {
  const Ast& ast;
  std::map<std::string, int> ids;         // variable name -> first-appearance ordinal
  std::map<std::string, int> def_count;   // variable name -> defs seen so far
  std::map<std::string, std::size_t> edges;

  std::string name_of(int node) const {
    const int t = ast.node(node).token;
    return t < 0 ? std::string() : ast.tokens[static_cast<std::size_t>(t)].text;
  }
  int id_of(const std::string& var) { return ids.emplace(var, static_cast<int>(ids.size())).first->second; }

  void def(const std::string& var) {
    id_of(var);
    def_count[var]++;
  }
  void use(const std::string& var) {
    const auto it = def_count.find(var);
    if (it == def_count.end()) return;
    edges["v" + std::to_string(id_of(var)) + "<-d" + std::to_string(it->second)]++;
  }

  void visit(int id) {
    const auto& n = ast.node(id);
    switch (n.kind) {
      case NodeKind::param:
        for (int c : n.children) visit(c);
        def(name_of(id));
        return;
      case NodeKind::var_declarator:
        for (int c : n.children) visit(c);
        def(name_of(id));
        return;
      case NodeKind::assignment: {
        const int lhs = n.children.front();
        const bool simple_target = ast.node(lhs).kind == NodeKind::name;
        const bool compound = ast.tokens[static_cast<std::size_t>(n.token)].text != "=";
        for (std::size_t i = 1; i < n.children.size(); ++i) visit(n.children[i]);
        if (simple_target) {
          if (compound) use(name_of(lhs));
          def(name_of(lhs));
        } else {
          visit(lhs);
        }
        return;
      }
      case NodeKind::prefix_update:
      case NodeKind::postfix_update: {
        const int target = n.children.front();
        if (ast.node(target).kind == NodeKind::name) {
          use(name_of(target));
          def(name_of(target));
        } else {
          visit(target);
        }
        return;
      }
      case NodeKind::call:
        for (int c : n.children) {
          if (ast.node(c).kind == NodeKind::name && ast.node(c).token == n.token) continue;
          visit(c);
        }
        return;
      case NodeKind::name:
        use(name_of(id));
        return;
      default:
        for (int c : n.children) visit(c);
    }
  }
};

double recall(const std::map<std::string, std::size_t>& a, const std::map<std::string, std::size_t>& b) {
  std::size_t total = 0;
  for (const auto& [_, c] : a) total += c;
  return static_cast<double>(multiset_intersection(a, b)) / static_cast<double>(total);
}

double dataflow_match(const Ast& a, const Ast& b) {
  DataflowExtractor ea{a, {}, {}, {}};
  DataflowExtractor eb{b, {}, {}, {}};
  ea.visit(a.root);
  eb.visit(b.root);
  if (ea.edges.empty() && eb.edges.empty()) return 1.0;
  if (ea.edges.empty() || eb.edges.empty()) return 0.0;
  return 0.5 * (recall(ea.edges, eb.edges) + recall(eb.edges, ea.edges));
}

double ast_match(const Ast& a, const Ast& b) {
  std::map<std::string, std::size_t> sa;
  std::map<std::string, std::size_t> sb;
  std::string shape;
  subtrees(a, a.root, sa, shape);
  subtrees(b, b.root, sb, shape);
  std::size_t na = 0;
  std::size_t nb = 0;
  for (const auto& [_, c] : sa) na += c;
  for (const auto& [_, c] : sb) nb += c;
  return 2.0 * static_cast<double>(multiset_intersection(sa, sb)) / static_cast<double>(na + nb);
}

std::vector<std::string> texts(const std::vector<frontend::SourceToken>& ts) {
  std::vector<std::string> out;
  out.reserve(ts.size());
  for (const auto& t : ts) out.push_back(t.text);
  return out;
}

std::vector<std::string> whitespace_split(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t j = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > j) out.emplace_back(s.substr(j, i - j));
  }
  return out;
}

}  // namespace

double ngram_match(const std::vector<std::string>& a, const std::vector<std::string>& b, int max_order) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  double log_sum = 0.0;
  int orders = 0;
  for (int n = 1; n <= max_order; ++n) {
    const auto ga = ngrams(a, static_cast<std::size_t>(n));
    const auto gb = ngrams(b, static_cast<std::size_t>(n));
    const std::size_t ca = a.size() >= static_cast<std::size_t>(n) ? a.size() - n + 1 : 0;
    const std::size_t cb = b.size() >= static_cast<std::size_t>(n) ? b.size() - n + 1 : 0;
    const std::size_t denom = std::max(ca, cb);
    if (denom == 0) break;
    const std::size_t hit = multiset_intersection(ga, gb);
    if (hit == 0) return 0.0;
    log_sum += std::log(static_cast<double>(hit) / static_cast<double>(denom));
    ++orders;
  }
  return std::exp(log_sum / orders);
}

double weighted_unigram_match(const std::vector<frontend::SourceToken>& a,
                              const std::vector<frontend::SourceToken>& b, double keyword_weight) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  std::map<std::string, std::size_t> ca;
  std::map<std::string, std::size_t> cb;
  std::map<std::string, double> w;
  for (const auto& t : a) {
    ca[t.text]++;
    w[t.text] = t.kind == frontend::TokenKind::keyword ? keyword_weight : 1.0;
  }
  for (const auto& t : b) {
    cb[t.text]++;
    w[t.text] = t.kind == frontend::TokenKind::keyword ? keyword_weight : 1.0;
  }
  double hit = 0.0;
  double ta = 0.0;
  double tb = 0.0;
  for (const auto& [k, c] : ca) {
    ta += w[k] * static_cast<double>(c);
    const auto it = cb.find(k);
    if (it != cb.end()) hit += w[k] * static_cast<double>(std::min(c, it->second));
  }
  for (const auto& [k, c] : cb) tb += w[k] * static_cast<double>(c);
  return hit / std::max(ta, tb);
}

CodeBleuScore codebleu(std::string_view a, std::string_view b, std::string_view language,
                       const CodeBleuOptions& options) {
  const auto& fe = frontend::frontend_for(language);
  CodeBleuScore s;
  std::vector<frontend::SourceToken> ta;
  std::vector<frontend::SourceToken> tb;
  try {
    ta = fe.tokenize(a);
    tb = fe.tokenize(b);
  } catch (const ParseError&) {
    s.degraded = true;
    s.ngram = ngram_match(whitespace_split(a), whitespace_split(b), options.max_order);
    s.score = s.ngram;
    return s;
  }
  s.ngram = ngram_match(texts(ta), texts(tb), options.max_order);
  try {
    const Ast xa = fe.parse_method_ast(a);
    const Ast xb = fe.parse_method_ast(b);
    s.weighted_ngram = weighted_unigram_match(ta, tb, options.keyword_weight);
    s.ast = ast_match(xa, xb);
    s.dataflow = dataflow_match(xa, xb);
    s.score = 0.25 * (s.ngram + s.weighted_ngram + s.ast + s.dataflow);
  } catch (const ParseError&) {
    s.degraded = true;
    s.score = s.ngram;
  }
  return s;
}

}  // namespace lasmut::metrics
