#include "lasmut/validator/validator.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "lasmut/frontend/frontend.hpp"
#include "lasmut/util/fs.hpp"
#include "lasmut/util/hash.hpp"
#include "lasmut/util/jsonl.hpp"
#include "lasmut/util/subprocess.hpp"

namespace lasmut::validator {

using nlohmann::json;
namespace fs = std::filesystem;

void to_json(json& j, const Baseline& b) {
  j = json{{"green", b.green},
           {"flaky", b.flaky},
           {"failing", b.failing},
           {"seconds", b.seconds},
           {"suite_seconds", b.suite_seconds},
           {"diagnostics", b.diagnostics}};
}

void from_json(const json& j, Baseline& b) {
  j.at("green").get_to(b.green);
  b.flaky = j.value("flaky", std::vector<std::string>{});
  b.failing = j.value("failing", std::vector<std::string>{});
  b.seconds = j.value("seconds", std::map<std::string, double>{});
  b.suite_seconds = j.value("suite_seconds", 0.0);
  b.diagnostics = j.value("diagnostics", std::vector<std::string>{});
}

namespace {

util::CommandResult build(const HarnessConfig& h, const fs::path& dir) {
  if (h.build_cmd.empty()) return util::CommandResult{0, false, 0.0, {}};
  return util::run_command(h.build_cmd, dir,
                           std::chrono::milliseconds(static_cast<long long>(h.build_timeout_seconds * 1000)));
}

std::string tail(const std::string& s, std::size_t n = 400) { return s.size() <= n ? s : s.substr(s.size() - n); }

}  // namespace

Baseline run_baseline(const fs::path& project, const HarnessConfig& harness, const fs::path& workspace) {
  util::copy_tree(project, workspace);
  const auto b = build(harness, workspace);
  if (b.timed_out || b.exit_code != 0) {
    throw Error("baseline build failed for " + project.string() + ":\n" + tail(b.output));
  }
  Baseline out;
  std::map<std::string, int> passes;
  std::set<std::string> seen;
  for (int round = 0; round < 2; ++round) {
    const TestRun run = run_tests(harness, workspace);
    if (run.timed_out) throw Error("baseline test run timed out");
    out.suite_seconds = std::max(out.suite_seconds, run.seconds);
    for (const auto& r : run.results) {
      if (r.status == TestStatus::skipped) continue;
      seen.insert(r.id);
      if (r.status == TestStatus::passed) passes[r.id] += 1;
      if (r.seconds) out.seconds[r.id] = std::max(out.seconds[r.id], *r.seconds);
    }
  }
  for (const auto& id : seen) {
    const int p = passes.count(id) ? passes[id] : 0;
    if (p == 2) {
      out.green.push_back(id);
    } else if (p == 1) {
      out.flaky.push_back(id);
      out.diagnostics.push_back("flaky test excluded: " + id);
    } else {
      out.failing.push_back(id);
    }
  }
  if (seen.empty()) out.diagnostics.push_back("no tests found; no mutant can be confirmed");
  return out;
}

std::vector<std::string> baseline_green_tests(const fs::path& project, const HarnessConfig& harness,
                                              const fs::path& workspace) {
  return run_baseline(project, harness, workspace).green;
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::syntactically_incorrect:
      return "syntactically_incorrect";
    case Verdict::killed:
      return "killed";
    case Verdict::survived:
      return "survived";
  }
  return "survived";
}

Verdict verdict_from_name(std::string_view name) {
  for (auto v : {Verdict::syntactically_incorrect, Verdict::killed, Verdict::survived}) {
    if (verdict_name(v) == name) return v;
  }
  throw Error("unknown verdict '" + std::string(name) + "'");
}

bool ValidationOutcome::consistent() const {
  for (const auto& t : failing_after) {
    if (std::find(green_tests_before.begin(), green_tests_before.end(), t) == green_tests_before.end()) return false;
  }
  switch (verdict) {
    case Verdict::killed:
      return compile_ok && !failing_after.empty();
    case Verdict::survived:
      return compile_ok && failing_after.empty();
    case Verdict::syntactically_incorrect:
      return !compile_ok && failing_after.empty();
  }
  return false;
}

void to_json(json& j, const ValidationOutcome& o) {
  j = json{{"mutant_id", o.mutant_id},
           {"compile_ok", o.compile_ok},
           {"green_tests_before", o.green_tests_before},
           {"failing_after", o.failing_after},
           {"timed_out", o.timed_out},
           {"verdict", verdict_name(o.verdict)},
           {"wall_time", o.wall_time}};
}

void from_json(const json& j, ValidationOutcome& o) {
  j.at("mutant_id").get_to(o.mutant_id);
  j.at("compile_ok").get_to(o.compile_ok);
  j.at("green_tests_before").get_to(o.green_tests_before);
  j.at("failing_after").get_to(o.failing_after);
  o.timed_out = j.value("timed_out", std::vector<std::string>{});
  o.verdict = verdict_from_name(j.at("verdict").get<std::string>());
  o.wall_time = j.value("wall_time", 0.0);
}

std::string patch_source(const std::string& source, const frontend::MethodRecord& original,
                         const std::string& mutant_text, std::string_view language) {
  const auto& fe = frontend::frontend_for(language);
  std::vector<frontend::LocatedMethod> methods;
  try {
    methods = fe.extract_file(original.file, source);
  } catch (const ParseError& e) {
    throw PatchConflict("cannot parse " + original.file + ": " + e.what());
  }
  for (const auto& m : methods) {
    if (m.record.id != original.id) continue;
    if (m.record.body != original.body) throw PatchConflict("method " + original.id + " changed since extraction");
    return source.substr(0, m.decl_start) + mutant_text + source.substr(m.decl_end);
  }
  throw PatchConflict("method " + original.id + " not found in " + original.file);
}

namespace {

// Test ids among `green` that did not pass; timeouts go to `timed_out` too.
void collect_failures(const TestRun& run, const std::vector<std::string>& green, std::vector<std::string>& failing,
                      std::vector<std::string>& timed_out) {
  std::set<std::string> passed;
  for (const auto& r : run.results) {
    if (r.status == TestStatus::passed) passed.insert(r.id);
  }
  for (const auto& id : green) {
    if (passed.count(id)) continue;
    failing.push_back(id);
    if (run.timed_out) timed_out.push_back(id);
  }
}

bool crashed(const HarnessConfig& h, const TestRun& run) {
  return !run.timed_out && h.report_format != ReportFormat::exitcode && run.results.empty();
}

}  // namespace

ValidationOutcome validate_mutant(const fs::path& project, const frontend::MethodRecord& original,
                                  const generator::MutantCandidate& mutant, const Baseline& baseline,
                                  const HarnessConfig& harness, const ValidateOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  ValidationOutcome out;
  out.mutant_id = mutant.mutant_id();
  out.green_tests_before = baseline.green;

  const fs::path ws = options.workspace_root / util::short_hash(out.mutant_id);
  util::copy_tree(project, ws);
  const fs::path file = ws / original.file;
  util::write_file(file, patch_source(util::read_file(file), original, mutant.text, options.language));

  const auto b = build(harness, ws);
  out.compile_ok = !b.timed_out && b.exit_code == 0;
  if (out.compile_ok && !baseline.green.empty()) {
    auto timeout_for = [&](const std::string* test) {
      double base = baseline.suite_seconds;
      if (test) {
        const auto it = baseline.seconds.find(*test);
        if (it != baseline.seconds.end()) base = it->second;
      }
      return std::max(harness.min_timeout_seconds, harness.timeout_factor * base);
    };
    auto run_with_retry = [&](const std::optional<std::string>& only, double timeout) {
      TestRun run = run_tests(harness, ws, only, timeout);
      if (crashed(harness, run)) run = run_tests(harness, ws, only, timeout);
      if (crashed(harness, run)) {
        throw Error("test harness produced no results for " + out.mutant_id + ":\n" + tail(run.output));
      }
      return run;
    };
    if (harness.test_filter_flag.empty()) {
      collect_failures(run_with_retry(std::nullopt, timeout_for(nullptr)), baseline.green, out.failing_after,
                       out.timed_out);
    } else {
      for (const auto& id : baseline.green) {
        collect_failures(run_with_retry(id, timeout_for(&id)), {id}, out.failing_after, out.timed_out);
      }
    }
  }
  if (!out.compile_ok) {
    out.verdict = Verdict::syntactically_incorrect;
  } else {
    out.verdict = out.failing_after.empty() ? Verdict::survived : Verdict::killed;
  }
  if (!options.keep_workspace) fs::remove_all(ws);
  out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace lasmut::validator
