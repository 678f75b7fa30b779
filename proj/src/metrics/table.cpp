#include "lasmut/metrics/table.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <fmt/format.h>

namespace lasmut::metrics {

using nlohmann::json;

namespace {

std::vector<std::string> dataset_ids_of(const std::vector<MetricsRecord>& records) {
  std::set<std::string> ids;
  for (const auto& r : records) {
    for (const auto& e : r.em_overlaps) ids.insert(e.other_dataset_id);
    for (const auto& c : r.codebleu_overlaps) ids.insert(c.other_dataset_id);
  }
  return {ids.begin(), ids.end()};
}

TableRow build_row(const std::string& project, const std::vector<MetricsRecord>& records,
                   const std::vector<validator::ValidationOutcome>& outcomes,
                   const std::vector<std::string>& dataset_ids) {
  std::map<std::string, const validator::ValidationOutcome*> by_id;
  for (const auto& o : outcomes) by_id[o.mutant_id] = &o;
  TableRow row;
  row.project = project;
  row.m = static_cast<double>(records.size());
  double si = 0;
  double ld = 0;
  double ed = 0;
  std::map<std::string, std::pair<double, double>> em;  // dataset -> (sum, count)
  std::map<std::string, std::pair<double, double>> cb;
  for (const auto& r : records) {
    const auto it = by_id.find(r.mutant_id);
    if (it == by_id.end()) continue;
    if (it->second->compile_ok) row.scm += 1;
    if (it->second->verdict != validator::Verdict::killed) continue;
    row.cb += 1;
    si += r.si;
    ld += r.deletion_only ? 1 : 0;
    ed += static_cast<double>(r.ed);
    for (const auto& e : r.em_overlaps) {
      em[e.other_dataset_id].first += e.em;
      em[e.other_dataset_id].second += 1;
    }
    for (const auto& c : r.codebleu_overlaps) {
      cb[c.other_dataset_id].first += c.score;
      cb[c.other_dataset_id].second += 1;
    }
  }
  if (row.cb > 0) {
    row.mean_si = si / row.cb;
    row.pct_ld = 100.0 * ld / row.cb;
    row.mean_ed = ed / row.cb;
  } else {
    row.mean_si = row.pct_ld = row.mean_ed = 0.0;
  }
  for (const auto& id : dataset_ids) {
    OverlapCell cell{id, std::nullopt, std::nullopt};
    if (em.count(id)) cell.em = em[id].first / em[id].second;
    if (cb.count(id)) cell.codebleu = cb[id].first / cb[id].second;
    row.overlaps.push_back(cell);
  }
  return row;
}

std::optional<double> mean_of(const std::vector<std::optional<double>>& xs) {
  double s = 0;
  std::size_t n = 0;
  for (const auto& x : xs) {
    if (!x) continue;
    s += *x;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return s / static_cast<double>(n);
}

json opt(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

std::string cell(const std::optional<double>& x) { return x ? fmt::format("{}", *x) : ""; }

}  // namespace

TableRow aggregate_row(const std::string& project, const std::vector<MetricsRecord>& records,
                       const std::vector<validator::ValidationOutcome>& outcomes) {
  return build_row(project, records, outcomes, dataset_ids_of(records));
}

Table aggregate_table(const std::vector<ProjectData>& projects) {
  Table t;
  std::set<std::string> ids;
  for (const auto& p : projects) {
    for (const auto& id : dataset_ids_of(p.records)) ids.insert(id);
  }
  t.dataset_ids.assign(ids.begin(), ids.end());
  for (const auto& p : projects) t.rows.push_back(build_row(p.project, p.records, p.outcomes, t.dataset_ids));

  t.total.project = "Total";
  t.average.project = "Average";
  for (const auto& r : t.rows) {
    t.total.m += r.m;
    t.total.scm += r.scm;
    t.total.cb += r.cb;
  }
  const double n = static_cast<double>(t.rows.size());
  if (n > 0) {
    t.average.m = t.total.m / n;
    t.average.scm = t.total.scm / n;
    t.average.cb = t.total.cb / n;
  }
  auto column = [&](auto get) {
    std::vector<std::optional<double>> xs;
    for (const auto& r : t.rows) xs.push_back(get(r));
    return mean_of(xs);
  };
  t.average.mean_si = column([](const TableRow& r) { return r.mean_si; });
  t.average.pct_ld = column([](const TableRow& r) { return r.pct_ld; });
  t.average.mean_ed = column([](const TableRow& r) { return r.mean_ed; });
  for (std::size_t d = 0; d < t.dataset_ids.size(); ++d) {
    t.total.overlaps.push_back({t.dataset_ids[d], std::nullopt, std::nullopt});
    t.average.overlaps.push_back({t.dataset_ids[d], column([&](const TableRow& r) { return r.overlaps[d].em; }),
                                  column([&](const TableRow& r) { return r.overlaps[d].codebleu; })});
  }
  return t;
}

void to_json(json& j, const TableRow& r) {
  json overlaps = json::array();
  for (const auto& c : r.overlaps) {
    overlaps.push_back({{"dataset_id", c.dataset_id}, {"em", opt(c.em)}, {"codebleu", opt(c.codebleu)}});
  }
  j = json{{"project", r.project}, {"M", r.m},           {"SCM", r.scm},
           {"CB", r.cb},           {"SI", opt(r.mean_si)}, {"LD_pct", opt(r.pct_ld)},
           {"ED", opt(r.mean_ed)}, {"overlaps", overlaps}};
}

void to_json(json& j, const Table& t) {
  j = json{{"rows", t.rows},
           {"total", t.total},
           {"average", t.average},
           {"dataset_ids", t.dataset_ids},
           {"codebleu", {{"max_order", CodeBleuOptions{}.max_order},
                         {"keyword_weight", CodeBleuOptions{}.keyword_weight},
                         {"component_weights", {0.25, 0.25, 0.25, 0.25}}}}};
}

std::string to_csv(const Table& t) {
  std::string out = "project,M,SCM,CB,SI,LD_pct,ED";
  for (const auto& id : t.dataset_ids) out += "," + id + "_EM," + id + "_CodeBLEU";
  out += '\n';
  auto line = [&](const TableRow& r) {
    out += fmt::format("{},{},{},{},{},{},{}", r.project, r.m, r.scm, r.cb, cell(r.mean_si), cell(r.pct_ld),
                       cell(r.mean_ed));
    for (const auto& c : r.overlaps) out += "," + cell(c.em) + "," + cell(c.codebleu);
    out += '\n';
  };
  for (const auto& r : t.rows) line(r);
  line(t.total);
  line(t.average);
  return out;
}

}  // namespace lasmut::metrics
