#include "lasmut/validator/harness.hpp"

#include <algorithm>
#include <regex>
#include <sstream>

#include "lasmut/util/error.hpp"
#include "lasmut/util/fs.hpp"
#include "lasmut/util/jsonl.hpp"
#include "lasmut/util/subprocess.hpp"

namespace lasmut::validator {

using nlohmann::json;
namespace fs = std::filesystem;

std::string_view report_format_name(ReportFormat f) {
  switch (f) {
    case ReportFormat::junit_xml:
      return "junit-xml";
    case ReportFormat::tap:
      return "tap";
    case ReportFormat::exitcode:
      return "exitcode";
  }
  return "exitcode";
}

ReportFormat report_format_from_name(std::string_view name) {
  for (auto f : {ReportFormat::junit_xml, ReportFormat::tap, ReportFormat::exitcode}) {
    if (report_format_name(f) == name) return f;
  }
  throw ConfigError("unknown report format '" + std::string(name) + "'");
}

void to_json(json& j, const HarnessConfig& h) {
  j = json{{"build_cmd", h.build_cmd},
           {"test_cmd", h.test_cmd},
           {"test_filter_flag", h.test_filter_flag},
           {"report_format", report_format_name(h.report_format)},
           {"report_glob", h.report_glob},
           {"build_timeout_seconds", h.build_timeout_seconds},
           {"timeout_factor", h.timeout_factor},
           {"min_timeout_seconds", h.min_timeout_seconds}};
  if (h.covered_methods) j["covered_methods"] = h.covered_methods->string();
}

void from_json(const json& j, HarnessConfig& h) {
  HarnessConfig d;
  h.build_cmd = j.value("build_cmd", d.build_cmd);
  h.test_cmd = j.at("test_cmd").get<std::string>();
  h.test_filter_flag = j.value("test_filter_flag", d.test_filter_flag);
  h.report_format = report_format_from_name(j.value("report_format", std::string("exitcode")));
  h.report_glob = j.value("report_glob", d.report_glob);
  h.build_timeout_seconds = j.value("build_timeout_seconds", d.build_timeout_seconds);
  h.timeout_factor = j.value("timeout_factor", d.timeout_factor);
  h.min_timeout_seconds = j.value("min_timeout_seconds", d.min_timeout_seconds);
  if (j.contains("covered_methods")) h.covered_methods = fs::path(j.at("covered_methods").get<std::string>());
}

HarnessConfig load_harness(const fs::path& path) {
  HarnessConfig h;
  try {
    h = util::read_json(path).get<HarnessConfig>();
  } catch (const json::exception& e) {
    throw ConfigError("bad harness config " + path.string() + ": " + e.what());
  }
  if (h.test_cmd.empty()) throw ConfigError("harness config " + path.string() + " has an empty test_cmd");
  if (h.timeout_factor <= 0) throw ConfigError("timeout_factor must be positive");
  if (h.covered_methods && h.covered_methods->is_relative()) {
    h.covered_methods = path.parent_path() / *h.covered_methods;
  }
  return h;
}

namespace {

std::string xml_unescape(std::string s) {
  static const std::pair<const char*, const char*> kEntities[] = {
      {"&lt;", "<"}, {"&gt;", ">"}, {"&quot;", "\""}, {"&apos;", "'"}, {"&amp;", "&"}};
  for (const auto& [from, to] : kEntities) {
    std::size_t pos = 0;
    const std::string f = from;
    while ((pos = s.find(f, pos)) != std::string::npos) {
      s.replace(pos, f.size(), to);
      pos += std::string_view(to).size();
    }
  }
  return s;
}

std::optional<std::string> attribute(const std::string& tag, const std::string& name) {
  const std::regex re("\\s" + name + "\\s*=\\s*(\"([^\"]*)\"|'([^']*)')");
  std::smatch m;
  if (!std::regex_search(tag, m, re)) return std::nullopt;
  return xml_unescape(m[2].matched ? m[2].str() : m[3].str());
}

}  // namespace

std::vector<TestResult> parse_junit_xml(const std::string& xml) {
  std::vector<TestResult> out;
  std::size_t pos = 0;
  while ((pos = xml.find("<testcase", pos)) != std::string::npos) {
    const std::size_t tag_end = xml.find('>', pos);
    if (tag_end == std::string::npos) break;
    const std::string tag = xml.substr(pos, tag_end - pos);
    const bool self_closing = tag_end > 0 && xml[tag_end - 1] == '/';
    std::string inner;
    std::size_t next = tag_end + 1;
    if (!self_closing) {
      const std::size_t close = xml.find("</testcase>", tag_end);
      if (close == std::string::npos) break;
      inner = xml.substr(tag_end + 1, close - tag_end - 1);
      next = close + 11;
    }
    TestResult r;
    const auto cls = attribute(tag, "classname");
    const auto name = attribute(tag, "name").value_or("");
    r.id = cls && !cls->empty() ? *cls + "." + name : name;
    if (const auto t = attribute(tag, "time")) {
      try {
        r.seconds = std::stod(*t);
      } catch (const std::exception&) {
      }
    }
    if (inner.find("<failure") != std::string::npos || inner.find("<error") != std::string::npos) {
      r.status = TestStatus::failed;
    } else if (inner.find("<skipped") != std::string::npos) {
      r.status = TestStatus::skipped;
    }
    out.push_back(std::move(r));
    pos = next;
  }
  return out;
}

std::vector<TestResult> parse_tap(const std::string& tap) {
  static const std::regex kLine(R"(^\s*(not ok|ok)\b\s*(\d+)?\s*(?:-\s*)?([^#]*?)\s*(#\s*(\w+).*)?$)");
  std::vector<TestResult> out;
  std::istringstream in(tap);
  std::string line;
  while (std::getline(in, line)) {
    std::smatch m;
    if (!std::regex_match(line, m, kLine)) continue;
    TestResult r;
    r.id = m[3].str();
    if (r.id.empty()) r.id = m[2].str();
    r.status = m[1].str() == "ok" ? TestStatus::passed : TestStatus::failed;
    if (m[5].matched) {
      std::string directive = m[5].str();
      std::transform(directive.begin(), directive.end(), directive.begin(), ::toupper);
      if (directive == "SKIP") r.status = TestStatus::skipped;
      if (directive == "TODO") r.status = TestStatus::skipped;
    }
    out.push_back(std::move(r));
  }
  return out;
}

TestRun run_tests(const HarnessConfig& h, const fs::path& dir, const std::optional<std::string>& only_test,
                  std::optional<double> timeout_seconds) {
  if (!h.report_glob.empty()) {
    for (const auto& p : util::glob(dir, h.report_glob)) fs::remove(p);
  }
  std::string cmd = h.test_cmd;
  if (only_test) {
    if (h.test_filter_flag.empty()) throw ConfigError("harness has no test_filter_flag");
    cmd += " " + h.test_filter_flag + " " + util::shell_quote(*only_test);
  }
  std::optional<std::chrono::milliseconds> timeout;
  if (timeout_seconds) timeout = std::chrono::milliseconds(static_cast<long long>(*timeout_seconds * 1000));
  const auto r = util::run_command(cmd, dir, timeout);

  TestRun run;
  run.timed_out = r.timed_out;
  run.exit_code = r.exit_code;
  run.seconds = r.seconds;
  run.output = r.output;
  std::string report;
  if (h.report_glob.empty()) {
    report = r.output;
  } else {
    for (const auto& p : util::glob(dir, h.report_glob)) report += util::read_file(p) + "\n";
  }
  switch (h.report_format) {
    case ReportFormat::junit_xml:
      run.results = parse_junit_xml(report);
      break;
    case ReportFormat::tap:
      run.results = parse_tap(report);
      break;
    case ReportFormat::exitcode:
      run.results.push_back(TestResult{only_test.value_or("suite"),
                                       !r.timed_out && r.exit_code == 0 ? TestStatus::passed : TestStatus::failed,
                                       r.seconds});
      break;
  }
  return run;
}

std::vector<std::string> read_covered_methods(const fs::path& path) {
  const std::string text = util::read_file(path);
  std::vector<std::string> out;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    out = json::parse(text).get<std::vector<std::string>>();
  } else {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
      if (!line.empty()) out.push_back(line);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace lasmut::validator
