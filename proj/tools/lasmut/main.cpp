// lasmut: attention-guided mutant generation pipeline.
#include <CLI11.hpp>
#include <fmt/format.h>

#include <iostream>
#include <map>

#include <unistd.h>

#include "lasmut/attention/analyzer.hpp"
#include "lasmut/attention/source.hpp"
#include "lasmut/attention/synthetic_model.hpp"
#include "lasmut/frontend/frontend.hpp"
#include "lasmut/generator/filter.hpp"
#include "lasmut/generator/llm.hpp"
#include "lasmut/generator/prompt.hpp"
#include "lasmut/metrics/metrics.hpp"
#include "lasmut/metrics/table.hpp"
#include "lasmut/pipeline/config.hpp"
#include "lasmut/pipeline/pipeline.hpp"
#include "lasmut/pipeline/report.hpp"
#include "lasmut/util/error.hpp"
#include "lasmut/util/jsonl.hpp"
#include "lasmut/validator/validator.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lasmut;

namespace {

std::vector<frontend::MethodRecord> read_methods(const fs::path& p) {
  std::vector<frontend::MethodRecord> out;
  for (const auto& j : util::read_jsonl(p)) out.push_back(j.get<frontend::MethodRecord>());
  return out;
}

template <typename T>
std::vector<json> records(const std::vector<T>& xs) {
  return std::vector<json>(xs.begin(), xs.end());
}

void emit(const std::string& out, const std::vector<json>& rows) {
  if (out.empty() || out == "-") {
    for (const auto& r : rows) std::cout << r.dump() << '\n';
  } else {
    util::write_jsonl(out, rows);
  }
}

struct ProviderFlags {
  std::string kind;
  std::string script;
  std::string replay;
  std::string endpoint;
  std::string model;
  std::optional<double> temperature;

  void add(CLI::App* app) {
    app->add_option("--provider", kind, "LLM provider: mock, http or replay");
    app->add_option("--script", script, "Mock provider script (JSONL)");
    app->add_option("--replay", replay, "Answer from a recorded archive");
    app->add_option("--endpoint", endpoint, "Base URL of an OpenAI-compatible API");
    app->add_option("--llm-model", model, "Model name sent to the provider");
    app->add_option("--temperature", temperature, "Sampling temperature");
  }

  void apply(generator::ProviderConfig& c) const {
    if (!kind.empty()) c.kind = kind;
    if (!script.empty()) c.script = script;
    if (!replay.empty()) {
      c.kind = "replay";
      c.archive = replay;
    }
    if (!endpoint.empty()) c.endpoint = endpoint;
    if (!model.empty()) c.model = model;
    if (temperature) c.temperature = *temperature;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Attention-guided mutant generation"};
  app.require_subcommand(1);

  // extract
  auto* extract = app.add_subcommand("extract", "Extract methods from a project as JSONL");
  std::string project;
  std::string language = "java";
  std::string out;
  extract->add_option("--project", project, "Project root")->required()->check(CLI::ExistingDirectory);
  extract->add_option("--language", language, "Language id");
  extract->add_option("--out", out, "Output JSONL (default stdout)");

  // dump
  auto* dump = app.add_subcommand("dump", "Write attention dumps for methods");
  std::string model = std::string(attention::kSyntheticModelId);
  std::string methods_path;
  std::size_t max_subtokens = attention::SyntheticModelOptions{}.max_subtokens;
  dump->add_option("--model", model, "Attention model id");
  dump->add_option("--methods", methods_path, "Methods JSONL")->required()->check(CLI::ExistingFile);
  dump->add_option("--out", out, "Output directory")->required();
  dump->add_option("--max-subtokens", max_subtokens, "Context length, specials included");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Select least-attended statements");
  int k = attention::kDefaultK;
  std::string attention_spec = "synthetic";
  analyze->add_option("--methods", methods_path, "Methods JSONL")->required()->check(CLI::ExistingFile);
  analyze->add_option("--attention", attention_spec, "synthetic, dir:<path> or cmd:<command>");
  analyze->add_option("--model", model, "Attention model id");
  analyze->add_option("--k", k, "Threshold percent")->check(CLI::Range(1, 100));
  analyze->add_option("--out", out, "Output JSONL (default stdout)");

  // generate
  auto* generate = app.add_subcommand("generate", "Prompt the LLM and filter candidates");
  std::string las_path;
  int n_bugs = generator::kDefaultBugs;
  std::string template_id = generator::kDefaultTemplate;
  std::string archive_out;
  ProviderFlags pflags;
  generate->add_option("--methods", methods_path, "Methods JSONL")->required()->check(CLI::ExistingFile);
  generate->add_option("--las", las_path, "LAS reports JSONL")->required()->check(CLI::ExistingFile);
  generate->add_option("--attention", attention_spec, "Attention source for candidates");
  generate->add_option("--model", model, "Attention model id");
  generate->add_option("--k", k, "Threshold percent")->check(CLI::Range(1, 100));
  generate->add_option("--n", n_bugs, "Bugs per method")->check(CLI::PositiveNumber);
  generate->add_option("--template", template_id, "Prompt template id or file:<path>");
  generate->add_option("--archive", archive_out, "Append every LLM call to this JSONL");
  generate->add_option("--out", out, "Candidates JSONL (default stdout)");
  pflags.add(generate);

  // validate
  auto* validate = app.add_subcommand("validate", "Confirm accepted mutants by running tests");
  std::string harness_path;
  std::string candidates_path;
  validate->add_option("--project", project, "Project root")->required()->check(CLI::ExistingDirectory);
  validate->add_option("--harness", harness_path, "Harness config JSON")->required()->check(CLI::ExistingFile);
  validate->add_option("--methods", methods_path, "Methods JSONL")->required()->check(CLI::ExistingFile);
  validate->add_option("--candidates", candidates_path, "Candidates JSONL")->required()->check(CLI::ExistingFile);
  validate->add_option("--out", out, "Outcomes JSONL (default stdout)");

  // metrics
  auto* metrics_cmd = app.add_subcommand("metrics", "Compute mutant metrics and the summary table");
  std::string outcomes_path;
  std::vector<std::string> compare;
  metrics_cmd->add_option("--methods", methods_path, "Methods JSONL")->required()->check(CLI::ExistingFile);
  metrics_cmd->add_option("--candidates", candidates_path, "Candidates JSONL")->required()->check(CLI::ExistingFile);
  metrics_cmd->add_option("--outcomes", outcomes_path, "Outcomes JSONL")->check(CLI::ExistingFile);
  metrics_cmd->add_option("--compare", compare, "Other dataset as id=path (repeatable)");
  metrics_cmd->add_option("--out", out, "Output directory")->required();

  // run
  auto* run = app.add_subcommand("run", "Run the whole pipeline");
  std::string config_path;
  std::optional<int> run_k;
  std::optional<int> run_n;
  std::string run_template;
  std::string run_dir;
  std::string output_dir;
  std::string stop_after;
  bool resume = false;
  bool skip_validation = false;
  std::optional<int> workers;
  run->add_option("--config", config_path, "Run config JSON")->check(CLI::ExistingFile);
  run->add_option("--project", project, "Project root");
  run->add_option("--harness", harness_path, "Harness config JSON");
  run->add_option("--attention", attention_spec, "synthetic, dir:<path> or cmd:<command>");
  run->add_option("--model", model, "Attention model id");
  run->add_option("--k", run_k, "Threshold percent")->check(CLI::Range(1, 100));
  run->add_option("--n", run_n, "Bugs per method")->check(CLI::PositiveNumber);
  run->add_option("--template", run_template, "Prompt template id or file:<path>");
  run->add_option("--output-dir", output_dir, "Directory holding run directories");
  run->add_option("--run-dir", run_dir, "Use exactly this run directory");
  run->add_flag("--resume", resume, "Continue the newest run with the same config");
  run->add_option("--stop-after", stop_after, "Last stage to run");
  run->add_flag("--skip-validation", skip_validation, "Do not run tests");
  run->add_option("--workers", workers, "Parallel workers per stage")->check(CLI::PositiveNumber);
  pflags.add(run);

  // report
  auto* report = app.add_subcommand("report", "Summarize a run");
  std::string report_target;
  bool as_json = false;
  report->add_option("run", report_target, "Run directory or manifest.json")->required()->check(CLI::ExistingPath);
  report->add_flag("--json", as_json, "Print JSON instead of text");

  CLI11_PARSE(app, argc, argv);

  try {
    if (extract->parsed()) {
      const auto res = frontend::extract_methods(project, language);
      for (const auto& d : res.diagnostics) fmt::print(stderr, "warning: {}: {}\n", d.file, d.message);
      emit(out, records(res.methods));
    } else if (dump->parsed()) {
      if (model != attention::kSyntheticModelId) {
        throw ConfigError("model " + model + " is not built in; run an external extractor with the same arguments");
      }
      attention::SyntheticModelOptions opts;
      opts.max_subtokens = max_subtokens;
      for (const auto& m : read_methods(methods_path)) {
        auto b = attention::synthetic_attention(m.text(), opts);
        b.method_id = m.id;
        if (b.truncated_from) {
          fmt::print(stderr, "warning: {} truncated from {} subtokens\n", m.id, *b.truncated_from);
        }
        attention::write_dump(fs::path(out) / attention::dump_file_name(m.id), b);
      }
    } else if (analyze->parsed()) {
      const auto src = attention::make_attention_source(attention_spec, model, fs::temp_directory_path() / "lasmut-cache");
      std::vector<json> rows;
      for (const auto& m : read_methods(methods_path)) {
        if (m.statements.empty()) continue;
        const auto b = src->lookup(m);
        if (!b) {
          fmt::print(stderr, "warning: no attention for {}\n", m.id);
          continue;
        }
        rows.push_back(attention::analyze(m, *b, attention::Percent(k)));
      }
      emit(out, rows);
    } else if (generate->parsed()) {
      generator::ProviderConfig pc;
      pflags.apply(pc);
      std::map<std::string, frontend::MethodRecord> by_id;
      for (auto& m : read_methods(methods_path)) by_id.emplace(m.id, std::move(m));
      const auto src = attention::make_attention_source(attention_spec, model, fs::temp_directory_path() / "lasmut-cache");
      const auto tmpl = generator::load_template(template_id);
      std::optional<fs::path> archive;
      if (!archive_out.empty()) archive = archive_out;
      generator::LlmClient client(generator::make_provider(pc), pc, archive);
      std::vector<json> rows;
      for (const auto& j : util::read_jsonl(las_path)) {
        const auto r = j.get<attention::LasReport>();
        const auto& m = by_id.at(r.method_id);
        const auto prompt = generator::build_prompt(m, r.las, n_bugs, tmpl);
        const auto q = client.query(prompt);
        for (const auto& w : q.warnings) fmt::print(stderr, "warning: {}\n", w);
        const auto res = generator::filter_candidates(m, r, q.candidates, *src, attention::Percent(k), n_bugs,
                                                      {q.provider_id, q.request_id, q.temperature});
        for (const auto& c : res.candidates) rows.push_back(c);
      }
      emit(out, rows);
    } else if (validate->parsed()) {
      const auto harness = validator::load_harness(harness_path);
      std::map<std::string, frontend::MethodRecord> by_id;
      for (auto& m : read_methods(methods_path)) by_id.emplace(m.id, std::move(m));
      const fs::path work = fs::temp_directory_path() / ("lasmut-validate-" + std::to_string(::getpid()));
      const auto baseline = validator::run_baseline(project, harness, work / "baseline");
      for (const auto& d : baseline.diagnostics) fmt::print(stderr, "warning: {}\n", d);
      validator::ValidateOptions vopts;
      vopts.workspace_root = work / "mutants";
      std::vector<json> rows;
      for (const auto& j : util::read_jsonl(candidates_path)) {
        const auto c = j.get<generator::MutantCandidate>();
        if (c.status() != generator::CandidateStatus::accepted) continue;
        rows.push_back(validator::validate_mutant(project, by_id.at(c.method_id), c, baseline, harness, vopts));
      }
      fs::remove_all(work);
      emit(out, rows);
    } else if (metrics_cmd->parsed()) {
      std::map<std::string, frontend::MethodRecord> by_id;
      for (auto& m : read_methods(methods_path)) by_id.emplace(m.id, std::move(m));
      std::vector<metrics::OtherDataset> others;
      for (const auto& spec : compare) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos) throw ConfigError("--compare expects id=path");
        metrics::OtherDataset od{spec.substr(0, eq), {}};
        for (const auto& r : util::read_jsonl(spec.substr(eq + 1))) {
          od.mutants.push_back({r.at("method_key").get<std::string>(), r.value("mutant_id", ""),
                                r.at("text").get<std::string>()});
        }
        others.push_back(std::move(od));
      }
      std::vector<metrics::MetricsRecord> recs;
      for (const auto& j : util::read_jsonl(candidates_path)) {
        const auto c = j.get<generator::MutantCandidate>();
        if (c.status() != generator::CandidateStatus::accepted) continue;
        recs.push_back(metrics::compute_metrics(c.mutant_id(), by_id.at(c.method_id), c.text, c.diff, others));
      }
      std::vector<validator::ValidationOutcome> outcomes;
      if (!outcomes_path.empty()) {
        for (const auto& j : util::read_jsonl(outcomes_path)) outcomes.push_back(j.get<validator::ValidationOutcome>());
      }
      const auto table = metrics::aggregate_table({{"project", recs, outcomes}});
      util::write_jsonl(fs::path(out) / "metrics.jsonl", records(recs));
      util::write_json(fs::path(out) / "table.json", json(table));
      util::write_file(fs::path(out) / "table.csv", metrics::to_csv(table));
    } else if (run->parsed()) {
      pipeline::RunConfig cfg;
      if (!config_path.empty()) cfg = pipeline::load_run_config(config_path);
      if (!project.empty()) cfg.project_root = project;
      if (!harness_path.empty()) cfg.harness_path = harness_path;
      if (run->count("--attention")) cfg.attention = attention_spec;
      if (run->count("--model")) cfg.model_id = model;
      if (run_k) cfg.k = *run_k;
      if (run_n) cfg.n_bugs = *run_n;
      if (!run_template.empty()) cfg.prompt_template = run_template;
      if (!output_dir.empty()) cfg.output_dir = output_dir;
      if (skip_validation) cfg.skip_validation = true;
      if (workers) cfg.workers = *workers;
      pflags.apply(cfg.provider);
      pipeline::RunOptions opts;
      if (!run_dir.empty()) opts.run_dir = fs::path(run_dir);
      opts.resume = resume;
      if (!stop_after.empty()) opts.stop_after = pipeline::stage_from_name(stop_after);
      opts.log = [](const std::string& msg) { fmt::print(stderr, "{}\n", msg); };
      const auto res = pipeline::run(cfg, opts);
      fmt::print("{}\n", (res.run_dir / "manifest.json").string());
    } else if (report->parsed()) {
      const auto r = pipeline::build_report(report_target);
      if (as_json) {
        std::cout << json(r).dump(2) << '\n';
      } else {
        std::cout << pipeline::render_report(r);
      }
    }
  } catch (const ConfigError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
