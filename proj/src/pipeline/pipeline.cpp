#include "lasmut/pipeline/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <exception>
#include <map>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "lasmut/attention/analyzer.hpp"
#include "lasmut/attention/source.hpp"
#include "lasmut/frontend/frontend.hpp"
#include "lasmut/generator/filter.hpp"
#include "lasmut/generator/llm.hpp"
#include "lasmut/generator/prompt.hpp"
#include "lasmut/metrics/metrics.hpp"
#include "lasmut/metrics/table.hpp"
#include "lasmut/util/error.hpp"
#include "lasmut/util/fs.hpp"
#include "lasmut/util/hash.hpp"
#include "lasmut/util/jsonl.hpp"
#include "lasmut/validator/validator.hpp"

namespace lasmut::pipeline {

using nlohmann::json;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::extract:
      return "extract";
    case Stage::attention:
      return "attention";
    case Stage::analyze:
      return "analyze";
    case Stage::generate:
      return "generate";
    case Stage::validate:
      return "validate";
    case Stage::metrics:
      return "metrics";
  }
  return "extract";
}

Stage stage_from_name(std::string_view name) {
  for (Stage s : kStages) {
    if (stage_name(s) == name) return s;
  }
  throw ConfigError("unknown stage '" + std::string(name) + "'");
}

void to_json(json& j, const TimingRecord& t) {
  j = json{{"phase", t.phase}, {"method_id", t.method_id}, {"millis", t.millis}};
}

void from_json(const json& j, TimingRecord& t) {
  j.at("phase").get_to(t.phase);
  j.at("method_id").get_to(t.method_id);
  j.at("millis").get_to(t.millis);
}

std::string run_dir_name(const RunConfig& config) {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return std::string(buf) + "-" + config.hash();
}

namespace {

double millis_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Runs fn(i) for i in [0, n) on up to `workers` threads; rethrows the first
// failure in index order.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto loop = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, workers)), n);
  if (threads <= 1) {
    loop();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(loop);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

template <typename T>
std::vector<json> to_records(const std::vector<T>& xs) {
  std::vector<json> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(x);
  return out;
}

template <typename T>
std::vector<T> read_records(const fs::path& p) {
  std::vector<T> out;
  if (!fs::exists(p)) return out;
  for (const auto& j : util::read_jsonl(p)) out.push_back(j.get<T>());
  return out;
}

std::vector<json> diagnostics_records(const std::vector<std::pair<std::string, std::string>>& items) {
  std::vector<json> out;
  for (const auto& [id, msg] : items) out.push_back({{"id", id}, {"message", msg}});
  return out;
}

class Runner {
 public:
  Runner(const RunConfig& config, fs::path dir, const RunOptions& options)
      : config_(config), dir_(std::move(dir)), options_(options), k_(config.k) {}

  RunResult run() {
    fs::create_directories(dir_ / "stages");
    fs::create_directories(dir_ / "timings");
    util::write_json(dir_ / "config.json", json(config_));
    external_digest_ = compute_external_digest();

    RunResult result;
    result.run_dir = dir_;
    RunManifest manifest;
    manifest.config_hash = config_.hash();
    std::set<std::string> artifacts{"config.json"};
    std::string chain = manifest.config_hash + external_digest_;
    bool stopped = false;
    for (Stage s : kStages) {
      const std::string name(stage_name(s));
      if (stopped) {
        manifest.stages.push_back({name, "not_run"});
        continue;
      }
      const std::string input_hash = util::sha256_hex(chain + "|" + name);
      const fs::path done = dir_ / "stages" / (name + ".done");
      std::optional<json> record = reusable(done, input_hash);
      if (record) {
        log(fmt::format("stage {}: up to date", name));
        result.reused.push_back(name);
      } else {
        log(fmt::format("stage {}: running", name));
        const auto [status, outputs] = execute(s);
        json outs = json::array();
        for (const auto& o : outputs) {
          const auto a = hash_artifact(dir_, o);
          outs.push_back({{"path", a.path}, {"sha256", a.sha256}, {"bytes", a.bytes}});
        }
        record = json{{"stage", name}, {"input_hash", input_hash}, {"status", status}, {"outputs", outs}};
        util::write_json(done, *record);
        result.executed.push_back(name);
      }
      manifest.stages.push_back({name, (*record)["status"].get<std::string>()});
      for (const auto& o : (*record)["outputs"]) {
        artifacts.insert(o["path"].get<std::string>());
        chain += o["sha256"].get<std::string>();
      }
      if (options_.stop_after && *options_.stop_after == s) stopped = true;
    }
    std::error_code ec;
    fs::remove(dir_ / "work", ec);  // only when empty
    for (const auto& a : artifacts) manifest.artifacts.push_back(hash_artifact(dir_, a));
    manifest.unhashed = {"run_info.json", "timings/"};
    util::write_json(dir_ / "manifest.json", json(manifest));
    util::write_json(dir_ / "run_info.json", json{{"run_dir", dir_.string()},
                                                  {"finished_at", std::time(nullptr)},
                                                  {"executed", result.executed},
                                                  {"reused", result.reused}});
    result.manifest = std::move(manifest);
    return result;
  }

 private:
  const RunConfig& config_;
  fs::path dir_;
  const RunOptions& options_;
  attention::Percent k_;
  std::string external_digest_;

  void log(const std::string& msg) const {
    if (options_.log) options_.log(msg);
  }

  fs::path path(const std::string& rel) const { return dir_ / rel; }

  // Digest of everything outside the run directory that stages read.
  std::string compute_external_digest() const {
    std::string acc;
    const auto& fe = frontend::frontend_for(config_.language);
    for (const auto& ext : fe.extensions()) {
      for (const auto& f : util::find_files(config_.project_root, ext)) {
        acc += fs::relative(f, config_.project_root).generic_string() + ":" + util::sha256_file(f) + "\n";
      }
    }
    auto add = [&](const fs::path& p) {
      if (!p.empty() && fs::is_regular_file(p)) acc += p.string() + ":" + util::sha256_file(p) + "\n";
    };
    if (config_.harness_path) add(*config_.harness_path);
    add(config_.provider.script);
    add(config_.provider.archive);
    for (const auto& d : config_.compare) add(d.path);
    return util::sha256_hex(acc);
  }

  std::optional<json> reusable(const fs::path& done, const std::string& input_hash) const {
    if (!fs::exists(done)) return std::nullopt;
    json record;
    try {
      record = util::read_json(done);
    } catch (const std::exception&) {
      return std::nullopt;
    }
    if (record.value("input_hash", "") != input_hash) return std::nullopt;
    for (const auto& o : record["outputs"]) {
      const fs::path p = path(o["path"].get<std::string>());
      if (!fs::exists(p) || util::sha256_file(p) != o["sha256"].get<std::string>()) return std::nullopt;
    }
    return record;
  }

  std::pair<std::string, std::vector<std::string>> execute(Stage s) {
    switch (s) {
      case Stage::extract:
        return {"completed", extract()};
      case Stage::attention:
        return {"completed", attention_stage()};
      case Stage::analyze:
        return {"completed", analyze()};
      case Stage::generate:
        return {"completed", generate()};
      case Stage::validate:
        if (config_.skip_validation) return {"skipped", {}};
        return {"completed", validate()};
      case Stage::metrics:
        return {"completed", metrics()};
    }
    return {"completed", {}};
  }

  std::vector<frontend::MethodRecord> methods() const {
    return read_records<frontend::MethodRecord>(path("methods.jsonl"));
  }

  std::vector<std::string> extract() {
    const auto res = frontend::extract_methods(config_.project_root, config_.language);
    util::write_jsonl(path("methods.jsonl"), to_records(res.methods));
    std::vector<json> diags;
    for (const auto& d : res.diagnostics) diags.push_back({{"file", d.file}, {"message", d.message}});
    util::write_jsonl(path("extract_diagnostics.jsonl"), diags);
    log(fmt::format("  {} methods, {} diagnostics", res.methods.size(), res.diagnostics.size()));
    return {"methods.jsonl", "extract_diagnostics.jsonl"};
  }

  std::unique_ptr<attention::AttentionSource> source() const {
    return attention::make_attention_source(config_.attention, config_.model_id, path("work/extractor-cache"));
  }

  std::vector<std::string> attention_stage() {
    const auto ms = methods();
    const auto src = source();
    std::vector<std::optional<attention::AttentionBundle>> bundles(ms.size());
    std::vector<std::string> errors(ms.size());
    fs::remove_all(path("attention"));
    fs::create_directories(path("attention"));
    parallel_for(ms.size(), config_.workers, [&](std::size_t i) {
      if (ms[i].statements.empty()) {
        errors[i] = "method has no statements";
        return;
      }
      try {
        bundles[i] = src->lookup(ms[i]);
        if (!bundles[i]) errors[i] = "no attention available";
      } catch (const Error& e) {
        errors[i] = e.what();
      }
    });
    std::vector<json> index;
    std::vector<std::pair<std::string, std::string>> diags;
    std::vector<std::string> outputs;
    for (std::size_t i = 0; i < ms.size(); ++i) {
      if (!bundles[i]) {
        diags.emplace_back(ms[i].id, errors[i]);
        continue;
      }
      const std::string rel = "attention/" + attention::dump_file_name(ms[i].id);
      attention::write_dump(path(rel), *bundles[i]);
      json entry = {{"method_id", ms[i].id}, {"dump", rel}, {"n", bundles[i]->n()}};
      if (bundles[i]->truncated_from) {
        entry["truncated_from"] = *bundles[i]->truncated_from;
        diags.emplace_back(ms[i].id, fmt::format("attention truncated from {} subtokens", *bundles[i]->truncated_from));
      }
      index.push_back(entry);
      outputs.push_back(rel);
    }
    util::write_jsonl(path("attention_index.jsonl"), index);
    util::write_jsonl(path("attention_diagnostics.jsonl"), diagnostics_records(diags));
    outputs.insert(outputs.begin(), {"attention_index.jsonl", "attention_diagnostics.jsonl"});
    return outputs;
  }

  std::vector<std::string> analyze() {
    std::map<std::string, std::string> dumps;
    for (const auto& e : util::read_jsonl(path("attention_index.jsonl"))) {
      dumps[e["method_id"].get<std::string>()] = e["dump"].get<std::string>();
    }
    std::vector<frontend::MethodRecord> ms;
    for (auto& m : methods()) {
      if (dumps.count(m.id)) ms.push_back(std::move(m));
    }
    std::vector<std::optional<attention::LasReport>> reports(ms.size());
    std::vector<std::string> errors(ms.size());
    std::vector<double> millis(ms.size());
    parallel_for(ms.size(), config_.workers, [&](std::size_t i) {
      const auto t0 = Clock::now();
      try {
        const auto bundle = attention::read_dump(path(dumps[ms[i].id]));
        attention::validate(bundle, ms[i].text().size());
        reports[i] = attention::analyze(ms[i], bundle, k_);
      } catch (const Error& e) {
        errors[i] = e.what();
      }
      millis[i] = millis_since(t0);
    });
    std::vector<json> out;
    std::vector<TimingRecord> timings;
    std::vector<std::pair<std::string, std::string>> diags;
    for (std::size_t i = 0; i < ms.size(); ++i) {
      if (!reports[i]) {
        diags.emplace_back(ms[i].id, errors[i]);
        continue;
      }
      out.push_back(*reports[i]);
      timings.push_back({"attention_analysis", ms[i].id, millis[i]});
    }
    util::write_jsonl(path("las_reports.jsonl"), out);
    util::write_jsonl(path("analyze_diagnostics.jsonl"), diagnostics_records(diags));
    util::write_jsonl(path("timings/analyze.jsonl"), to_records(timings));
    return {"las_reports.jsonl", "analyze_diagnostics.jsonl"};
  }

  std::vector<std::string> generate() {
    std::map<std::string, frontend::MethodRecord> by_id;
    for (auto& m : methods()) by_id.emplace(m.id, std::move(m));
    const auto reports = read_records<attention::LasReport>(path("las_reports.jsonl"));
    std::map<std::string, double> analysis_ms;
    for (const auto& t : read_records<TimingRecord>(path("timings/analyze.jsonl"))) analysis_ms[t.method_id] = t.millis;

    std::optional<std::set<std::string>> covered;
    if (config_.harness_path) {
      const auto h = validator::load_harness(*config_.harness_path);
      if (h.covered_methods) {
        const auto ids = validator::read_covered_methods(*h.covered_methods);
        covered.emplace(ids.begin(), ids.end());
      }
    }

    const auto tmpl = generator::load_template(config_.prompt_template);
    auto provider = generator::make_provider(config_.provider);
    // Responses archived by an interrupted earlier attempt are answered from
    // the partial archive instead of being requested again.
    const fs::path partial = path("work/llm_archive.partial.jsonl");
    if (fs::exists(partial)) {
      provider = std::make_unique<PartialArchiveProvider>(std::move(provider), partial);
    }
    generator::LlmClient client(std::move(provider), config_.provider, partial);
    const auto src = source();

    struct Item {
      std::optional<generator::PromptSpec> prompt;
      std::optional<generator::QueryResult> query;
      generator::FilterResult filtered;
      std::vector<std::string> diags;
      double prompting_ms = 0;
      double e2e_ms = 0;
    };
    std::vector<Item> items(reports.size());
    parallel_for(reports.size(), config_.workers, [&](std::size_t i) {
      const auto& r = reports[i];
      Item& item = items[i];
      const auto it = by_id.find(r.method_id);
      if (it == by_id.end()) {
        item.diags.push_back("method missing from methods.jsonl");
        return;
      }
      if (covered && !covered->count(r.method_id)) {
        item.diags.push_back("method not covered by green tests");
        return;
      }
      const auto& m = it->second;
      const auto t0 = Clock::now();
      try {
        item.prompt = generator::build_prompt(m, r.las, config_.n_bugs, tmpl, config_.context_budget, config_.language);
        item.query = client.query(*item.prompt);
      } catch (const generator::PromptTooLarge& e) {
        item.diags.push_back(e.what());
        return;
      }
      item.prompting_ms = millis_since(t0);
      for (const auto& w : item.query->warnings) item.diags.push_back(w);
      const generator::Provenance prov{item.query->provider_id, item.query->request_id, item.query->temperature};
      item.filtered = generator::filter_candidates(m, r, item.query->candidates, *src, k_, config_.n_bugs, prov, 0,
                                                   config_.language);
      const auto a = analysis_ms.find(r.method_id);
      item.e2e_ms = millis_since(t0) + (a == analysis_ms.end() ? 0.0 : a->second);
    });

    std::vector<json> prompts, archive, candidates, retry, timings;
    std::vector<std::pair<std::string, std::string>> diags;
    for (std::size_t i = 0; i < items.size(); ++i) {
      const auto& item = items[i];
      for (const auto& d : item.diags) diags.emplace_back(reports[i].method_id, d);
      if (!item.query) continue;
      prompts.push_back(*item.prompt);
      archive.push_back(item.query->archive_record);
      for (const auto& c : item.filtered.candidates) candidates.push_back(c);
      for (const auto& e : item.filtered.retry_queue) retry.push_back(e);
      timings.push_back(TimingRecord{"prompting", reports[i].method_id, item.prompting_ms});
      timings.push_back(TimingRecord{"end_to_end_generation", reports[i].method_id, item.e2e_ms});
    }
    util::write_jsonl(path("prompts.jsonl"), prompts);
    util::write_jsonl(path("llm_archive.jsonl"), archive);
    util::write_jsonl(path("candidates.jsonl"), candidates);
    util::write_jsonl(path("retry_queue.jsonl"), retry);
    util::write_jsonl(path("generate_diagnostics.jsonl"), diagnostics_records(diags));
    util::write_jsonl(path("timings/generate.jsonl"), timings);
    fs::remove(partial);
    log(fmt::format("  {} prompts, {} candidates", prompts.size(), candidates.size()));
    return {"prompts.jsonl", "llm_archive.jsonl", "candidates.jsonl", "retry_queue.jsonl",
            "generate_diagnostics.jsonl"};
  }

  // Serves archived responses by request id and defers to `inner` otherwise.
  class PartialArchiveProvider : public generator::LlmProvider {
   public:
    PartialArchiveProvider(std::unique_ptr<generator::LlmProvider> inner, const fs::path& archive)
        : inner_(std::move(inner)) {
      for (const auto& r : util::read_jsonl(archive)) {
        if (r.value("ok", true)) {
          cached_[r["request_id"].get<std::string>()] = {r["response"].get<std::string>(),
                                                         r.value("provider_id", inner_->id())};
        }
      }
    }
    std::string id() const override { return inner_->id(); }
    generator::Completion complete(const generator::PromptSpec& prompt, const std::string& request_id) override {
      const auto it = cached_.find(request_id);
      if (it != cached_.end()) return it->second;
      return inner_->complete(prompt, request_id);
    }

   private:
    std::unique_ptr<generator::LlmProvider> inner_;
    std::map<std::string, generator::Completion> cached_;
  };

  std::vector<generator::MutantCandidate> accepted_candidates() const {
    std::vector<generator::MutantCandidate> out;
    for (auto& c : read_records<generator::MutantCandidate>(path("candidates.jsonl"))) {
      if (c.status() == generator::CandidateStatus::accepted) out.push_back(std::move(c));
    }
    return out;
  }

  std::vector<std::string> validate() {
    const auto harness = validator::load_harness(*config_.harness_path);
    std::map<std::string, frontend::MethodRecord> by_id;
    for (auto& m : methods()) by_id.emplace(m.id, std::move(m));
    const auto mutants = accepted_candidates();

    const fs::path work = path("work/validate");
    fs::remove_all(work);
    const auto baseline = validator::run_baseline(config_.project_root, harness, work / "baseline");
    fs::remove_all(work / "baseline");
    for (const auto& d : baseline.diagnostics) log("  " + d);

    std::vector<std::optional<validator::ValidationOutcome>> outcomes(mutants.size());
    std::vector<std::string> errors(mutants.size());
    validator::ValidateOptions vopts;
    vopts.workspace_root = work / "mutants";
    vopts.language = config_.language;
    parallel_for(mutants.size(), config_.workers, [&](std::size_t i) {
      try {
        outcomes[i] = validator::validate_mutant(config_.project_root, by_id.at(mutants[i].method_id), mutants[i],
                                                 baseline, harness, vopts);
      } catch (const Error& e) {
        errors[i] = e.what();
      }
    });
    fs::remove_all(work);

    json base = baseline;
    base.erase("seconds");
    base.erase("suite_seconds");
    util::write_json(path("baseline.json"), base);
    std::vector<json> out;
    std::vector<TimingRecord> timings;
    std::vector<std::pair<std::string, std::string>> diags;
    for (std::size_t i = 0; i < mutants.size(); ++i) {
      if (!outcomes[i]) {
        diags.emplace_back(mutants[i].mutant_id(), errors[i]);
        continue;
      }
      json j = *outcomes[i];
      j.erase("wall_time");
      out.push_back(j);
      timings.push_back({"validation", mutants[i].mutant_id(), outcomes[i]->wall_time * 1000.0});
    }
    util::write_jsonl(path("outcomes.jsonl"), out);
    util::write_jsonl(path("validate_diagnostics.jsonl"), diagnostics_records(diags));
    util::write_jsonl(path("timings/validate.jsonl"), to_records(timings));
    return {"baseline.json", "outcomes.jsonl", "validate_diagnostics.jsonl"};
  }

  std::vector<std::string> metrics() {
    std::map<std::string, frontend::MethodRecord> by_id;
    for (auto& m : methods()) by_id.emplace(m.id, std::move(m));
    const auto mutants = accepted_candidates();
    std::vector<validator::ValidationOutcome> outcomes;
    if (!config_.skip_validation) outcomes = read_records<validator::ValidationOutcome>(path("outcomes.jsonl"));
    std::set<std::string> killed;
    for (const auto& o : outcomes) {
      if (o.verdict == validator::Verdict::killed) killed.insert(o.mutant_id);
    }

    std::vector<metrics::OtherDataset> others;
    for (const auto& d : config_.compare) {
      metrics::OtherDataset od{d.id, {}};
      for (const auto& r : util::read_jsonl(d.path)) {
        od.mutants.push_back({r.at("method_key").get<std::string>(), r.value("mutant_id", ""),
                              r.at("text").get<std::string>()});
      }
      others.push_back(std::move(od));
    }

    std::vector<metrics::MetricsRecord> records(mutants.size());
    parallel_for(mutants.size(), config_.workers, [&](std::size_t i) {
      const auto& c = mutants[i];
      records[i] = metrics::compute_metrics(c.mutant_id(), by_id.at(c.method_id), c.text, c.diff, others,
                                            config_.language);
    });
    util::write_jsonl(path("metrics.jsonl"), to_records(records));

    const std::string project = fs::path(config_.project_root).filename().string();
    const auto table = metrics::aggregate_table({{project.empty() ? "project" : project, records, outcomes}});
    util::write_json(path("table.json"), json(table));
    util::write_file(path("table.csv"), metrics::to_csv(table));

    // Overlap of our confirmed bugs (accepted mutants without validation).
    std::vector<metrics::DatasetMutant> ours;
    for (const auto& c : mutants) {
      if (config_.skip_validation || killed.count(c.mutant_id())) ours.push_back({c.method_id, c.mutant_id(), c.text});
    }
    json overlap = json::object();
    for (const auto& o : others) overlap[o.id] = metrics::cross_dataset_overlap(ours, o.mutants, config_.language);
    util::write_json(path("overlap.json"), overlap);
    return {"metrics.jsonl", "table.json", "table.csv", "overlap.json"};
  }
};

std::optional<fs::path> latest_run(const fs::path& output_dir, const std::string& hash) {
  if (!fs::is_directory(output_dir)) return std::nullopt;
  std::vector<fs::path> matches;
  for (const auto& e : fs::directory_iterator(output_dir)) {
    const std::string name = e.path().filename().string();
    if (e.is_directory() && name.size() > hash.size() && name.ends_with("-" + hash)) matches.push_back(e.path());
  }
  if (matches.empty()) return std::nullopt;
  return *std::max_element(matches.begin(), matches.end());
}

}  // namespace

RunResult run(const RunConfig& config, const RunOptions& options) {
  config.validate();
  fs::path dir;
  if (options.run_dir) {
    dir = *options.run_dir;
  } else if (auto prev = options.resume ? latest_run(config.output_dir, config.hash()) : std::nullopt) {
    dir = *prev;
  } else {
    dir = config.output_dir / run_dir_name(config);
  }
  Runner runner(config, dir, options);
  return runner.run();
}

}  // namespace lasmut::pipeline
