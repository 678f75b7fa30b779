#include "lasmut/pipeline/report.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "lasmut/util/jsonl.hpp"

namespace lasmut::pipeline {

using nlohmann::json;
namespace fs = std::filesystem;

PhaseStats phase_stats(std::vector<double> millis) {
  PhaseStats s;
  s.count = millis.size();
  if (millis.empty()) return s;
  std::sort(millis.begin(), millis.end());
  s.mean = std::accumulate(millis.begin(), millis.end(), 0.0) / static_cast<double>(millis.size());
  const std::size_t n = millis.size();
  s.median = n % 2 == 1 ? millis[n / 2] : 0.5 * (millis[n / 2 - 1] + millis[n / 2]);
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
  s.p95 = millis[std::max<std::size_t>(rank, 1) - 1];
  return s;
}

RunReport build_report(const fs::path& run_dir_or_manifest) {
  const fs::path dir = fs::is_directory(run_dir_or_manifest) ? run_dir_or_manifest : run_dir_or_manifest.parent_path();
  auto records = [&](const std::string& rel) {
    return fs::exists(dir / rel) ? util::read_jsonl(dir / rel) : std::vector<json>{};
  };
  RunReport r;
  for (const auto& c : records("candidates.jsonl")) {
    const std::string status = c.at("status").get<std::string>();
    ++r.funnel.generated;
    if (status != "rejected_unparseable") ++r.funnel.parseable;
    if (status == "accepted") ++r.funnel.accepted;
  }
  for (const auto& o : records("outcomes.jsonl")) {
    if (o.at("compile_ok").get<bool>()) ++r.funnel.compiled;
    if (o.at("verdict").get<std::string>() == "killed") ++r.funnel.killed;
  }
  std::map<std::string, std::vector<double>> by_phase;
  for (const char* phase : kPhases) by_phase[phase];
  if (fs::is_directory(dir / "timings")) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir / "timings")) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      for (const auto& t : util::read_jsonl(f)) {
        by_phase[t.at("phase").get<std::string>()].push_back(t.at("millis").get<double>());
      }
    }
  }
  for (auto& [phase, xs] : by_phase) r.phases[phase] = phase_stats(std::move(xs));
  if (fs::exists(dir / "table.json")) r.table = util::read_json(dir / "table.json");
  return r;
}

namespace {

std::string num(const json& v) {
  if (v.is_null()) return "-";
  const double x = v.get<double>();
  if (x == std::floor(x) && std::abs(x) < 1e12) return fmt::format("{}", static_cast<long long>(x));
  return fmt::format("{:.2f}", x);
}

}  // namespace

std::string render_report(const RunReport& r) {
  std::string out;
  const auto& f = r.funnel;
  out += "Funnel (generated/parseable/accepted/compiled/killed)\n";
  out += fmt::format("  {}/{}/{}/{}/{}\n\n", f.generated, f.parseable, f.accepted, f.compiled, f.killed);
  out += fmt::format("{:<24}{:>7}{:>12}{:>12}{:>12}\n", "Phase (ms)", "n", "mean", "median", "p95");
  for (const char* phase : kPhases) {
    const auto& s = r.phases.at(phase);
    out += fmt::format("{:<24}{:>7}{:>12.3f}{:>12.3f}{:>12.3f}\n", phase, s.count, s.mean, s.median, s.p95);
  }
  if (r.table.is_null()) return out;
  out += "\n";
  std::vector<std::string> ids = r.table.value("dataset_ids", std::vector<std::string>{});
  std::string header = fmt::format("{:<16}{:>6}{:>6}{:>6}{:>8}{:>8}{:>10}", "Project", "M", "SCM", "CB", "SI", "LD%", "ED");
  for (const auto& id : ids) header += fmt::format("  {:>20}", "<EM,CB> " + id);
  out += header + "\n";
  auto row = [&](const json& x) {
    std::string line = fmt::format("{:<16}{:>6}{:>6}{:>6}{:>8}{:>8}{:>10}", x["project"].get<std::string>(), num(x["M"]),
                                   num(x["SCM"]), num(x["CB"]), num(x["SI"]), num(x["LD_pct"]), num(x["ED"]));
    for (const auto& c : x["overlaps"]) line += fmt::format("  {:>20}", "<" + num(c["em"]) + "," + num(c["codebleu"]) + ">");
    out += line + "\n";
  };
  for (const auto& x : r.table["rows"]) row(x);
  row(r.table["total"]);
  row(r.table["average"]);
  return out;
}

void to_json(json& j, const RunReport& r) {
  json phases = json::object();
  for (const auto& [name, s] : r.phases) {
    phases[name] = {{"count", s.count}, {"mean", s.mean}, {"median", s.median}, {"p95", s.p95}};
  }
  j = json{{"funnel",
            {{"generated", r.funnel.generated},
             {"parseable", r.funnel.parseable},
             {"accepted", r.funnel.accepted},
             {"compiled", r.funnel.compiled},
             {"killed", r.funnel.killed}}},
           {"phases", phases},
           {"table", r.table}};
}

}  // namespace lasmut::pipeline
