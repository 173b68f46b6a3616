// Copyright 2026 The ecforge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ecforge/pipeline.h"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <ostream>
#include <set>

#include "ecforge/errors.h"
#include "ecforge/eval.h"
#include "ecforge/hashing.h"
#include "ecforge/knowledge.h"
#include "ecforge/parallel.h"
#include "json.hpp"

namespace ecforge {

namespace fs = std::filesystem;

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

const std::set<std::string> kConfigKeys = {
    "version",  "corpus",  "causal_pool", "template",   "clients",
    "ratio",    "sweep_ratios", "seed",   "workers",    "output_dir",
    "cache",    "cache_path",   "emotional_knowledge",  "run_id"};

EndpointSetting ParseEndpoint(const json &value, const std::string &role) {
  if (value.is_string()) {
    if (value.get<std::string>() == "mock") return std::monostate{};
    throw ConfigError("clients." + role + ": expected \"mock\" or an object");
  }
  if (!value.is_object()) {
    throw ConfigError("clients." + role + ": expected \"mock\" or an object");
  }
  InferenceEndpoint endpoint;
  try {
    endpoint.base_url = value.at("base_url").get<std::string>();
    endpoint.timeout_ms = value.value("timeout_ms", endpoint.timeout_ms);
    endpoint.max_retries = value.value("max_retries", endpoint.max_retries);
  } catch (const json::exception &e) {
    throw ConfigError("clients." + role + ": " + e.what());
  }
  endpoint.Validate();
  return endpoint;
}

ordered_json EndpointJson(const EndpointSetting &setting) {
  if (std::holds_alternative<std::monostate>(setting)) return "mock";
  const auto &e = std::get<InferenceEndpoint>(setting);
  return {{"base_url", e.base_url},
          {"timeout_ms", e.timeout_ms},
          {"max_retries", e.max_retries}};
}

MixRatio RatioFromJson(const json &value) {
  if (value.is_number_integer()) return {1, value.get<int>()};
  if (value.is_string()) return MixRatio::Parse(value.get<std::string>());
  throw ConfigError("ratio must be \"1:k\" or an integer");
}

std::string RatioSlug(const MixRatio &r) {
  return std::to_string(r.ecpe_part) + "-" + std::to_string(r.causal_part);
}

class StageTimer {
 public:
  StageTimer() : start_(std::chrono::steady_clock::now()) {}
  double ElapsedMs() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

std::string RunConfig::Resolve(const std::string &path) const {
  if (path.empty() || fs::path(path).is_absolute() || config_dir.empty()) {
    return path;
  }
  return (fs::path(config_dir) / path).lexically_normal().string();
}

std::string RunConfig::OutputPath(const std::string &relative) const {
  return (fs::path(Resolve(output_dir)) / relative).string();
}

std::string RunConfig::CachePath() const {
  if (!cache_path.empty()) return Resolve(cache_path);
  return OutputPath("cache/knowledge.jsonl");
}

std::string RunConfig::SnapshotJson() const {
  ordered_json out;
  out["version"] = kVersion;
  out["corpus"] = {{"train", train_path},
                   {"test", test_path},
                   {"format", corpus_format == CorpusFormat::kCanonicalJsonl
                                  ? "canonical-jsonl"
                                  : "legacy-tabular"}};
  out["causal_pool"] = causal_pool_path;
  out["template"] = template_path;
  out["clients"] = {{"generator", EndpointJson(generator)},
                    {"embedder", EndpointJson(embedder)},
                    {"polarity", EndpointJson(polarity)},
                    {"completer", EndpointJson(completer)},
                    {"mock",
                     {{"dim", mock.dim}, {"none_fraction", mock.none_fraction}}}};
  out["ratio"] = ratio.ToString();
  ordered_json sweep = ordered_json::array();
  for (const auto &r : sweep_ratios) sweep.push_back(r.ToString());
  out["sweep_ratios"] = std::move(sweep);
  out["seed"] = seed;
  out["workers"] = workers;
  out["output_dir"] = output_dir;
  out["cache"] = use_cache;
  out["cache_path"] = cache_path;
  out["emotional_knowledge"] = emotional_knowledge;
  out["run_id"] = run_id;
  return out.dump(2);
}

RunConfig ParseRunConfig(std::string_view text, const std::string &config_dir,
                         const ConfigOverrides &overrides) {
  json in = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (!in.is_object()) throw ConfigError("config is not a JSON object");
  for (const auto &[key, value] : in.items()) {
    if (!kConfigKeys.count(key)) {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  RunConfig config;
  config.config_dir = config_dir;
  try {
    if (in.value("version", 0) != RunConfig::kVersion) {
      throw ConfigError("config version must be " +
                        std::to_string(RunConfig::kVersion));
    }
    const json &corpus = in.at("corpus");
    config.train_path = corpus.at("train").get<std::string>();
    config.test_path = corpus.at("test").get<std::string>();
    config.corpus_format =
        ParseCorpusFormat(corpus.value("format", "canonical-jsonl"));
    config.causal_pool_path = in.value("causal_pool", "");
    config.template_path = in.value("template", "");

    json clients = in.value("clients", json::object());
    auto role = [&](const char *name) {
      return clients.contains(name) ? ParseEndpoint(clients[name], name)
                                    : EndpointSetting{};
    };
    config.generator = role("generator");
    config.embedder = role("embedder");
    config.polarity = role("polarity");
    config.completer = role("completer");
    if (clients.contains("mock")) {
      const json &mock = clients["mock"];
      config.mock.dim = mock.value("dim", config.mock.dim);
      config.mock.none_fraction =
          mock.value("none_fraction", config.mock.none_fraction);
    }

    if (in.contains("ratio")) config.ratio = RatioFromJson(in["ratio"]);
    if (in.contains("sweep_ratios")) {
      config.sweep_ratios.clear();
      for (const auto &r : in["sweep_ratios"]) {
        config.sweep_ratios.push_back(RatioFromJson(r));
      }
    }
    if (!in.contains("seed") || !in["seed"].is_number_integer()) {
      throw ConfigError("config must set an explicit integer 'seed'");
    }
    config.seed = in["seed"].get<uint64_t>();
    config.workers = in.value("workers", config.workers);
    config.output_dir = in.value("output_dir", config.output_dir);
    config.use_cache = in.value("cache", config.use_cache);
    config.cache_path = in.value("cache_path", config.cache_path);
    config.emotional_knowledge =
        in.value("emotional_knowledge", config.emotional_knowledge);
    config.run_id = in.value("run_id", config.run_id);
  } catch (const json::exception &e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  if (overrides.seed) config.seed = *overrides.seed;
  if (overrides.ratio) config.ratio = MixRatio::Parse(*overrides.ratio);
  if (overrides.workers) config.workers = *overrides.workers;
  if (overrides.output_dir) config.output_dir = *overrides.output_dir;
  if (overrides.run_id) config.run_id = *overrides.run_id;
  if (overrides.no_emotional_knowledge) config.emotional_knowledge = false;
  if (overrides.no_causal_knowledge) config.ratio = {1, 0};

  if (config.workers < 1) throw ConfigError("workers must be >= 1");
  for (const std::string *path :
       {&config.train_path, &config.test_path, &config.causal_pool_path,
        &config.template_path}) {
    if (!path->empty() && !fs::exists(config.Resolve(*path))) {
      throw ConfigError("referenced file does not exist: '" + *path + "'");
    }
  }
  return config;
}

RunConfig LoadRunConfig(const std::string &path,
                        const ConfigOverrides &overrides) {
  std::string dir = fs::path(path).parent_path().string();
  return ParseRunConfig(ReadFile(path), dir, overrides);
}

ClientSet MakeClients(const RunConfig &config) {
  std::shared_ptr<MockModelClient> mock;
  std::optional<std::string> token;
  if (const char *env = std::getenv(std::string(kAuthTokenEnv).c_str())) {
    if (*env) token = env;
  }
  auto make = [&](const EndpointSetting &setting) -> std::shared_ptr<ModelClient> {
    if (std::holds_alternative<std::monostate>(setting)) {
      if (!mock) {
        mock = std::make_shared<MockModelClient>(config.mock);
        // The mock completer echoes gold answers for known documents.
        std::map<std::string, std::string> gold;
        for (const std::string &path : {config.train_path, config.test_path}) {
          Corpus corpus = LoadCorpus(config.Resolve(path), config.corpus_format);
          for (const Document &doc : corpus.documents) {
            if (!doc.gold_pairs.empty()) {
              gold[doc.doc_id] = RenderResponse(doc.gold_pairs);
            }
          }
        }
        mock->SetGoldResponses(std::move(gold));
      }
      return mock;
    }
    InferenceEndpoint endpoint = std::get<InferenceEndpoint>(setting);
    endpoint.auth_token = token;
    return std::make_shared<HttpModelClient>(endpoint);
  };
  ClientSet clients;
  clients.generator = make(config.generator);
  clients.embedder = make(config.embedder);
  clients.polarity = make(config.polarity);
  clients.completer = make(config.completer);
  return clients;
}

// Pipeline -------------------------------------------------------------

namespace {

ordered_json BaseManifest(const RunConfig &config, const ClientSet &clients,
                          std::string_view stage) {
  ordered_json m;
  m["tool"] = "ecforge";
  m["tool_version"] = kToolVersion;
  m["stage"] = stage;
  m["config"] = ordered_json::parse(config.SnapshotJson());
  m["clients"] = {{"generator", clients.generator->Fingerprint()},
                  {"embedder", clients.embedder->Fingerprint()},
                  {"polarity", clients.polarity->Fingerprint()},
                  {"completer", clients.completer->Fingerprint()}};
  m["inputs"] = ordered_json::object();
  return m;
}

void AddInput(ordered_json &manifest, const std::string &label,
              const std::string &path) {
  manifest["inputs"][label] = ContentHash(ReadFile(path));
}

void WriteJson(const std::string &path, const ordered_json &value) {
  WriteFile(path, value.dump(2) + "\n");
}

int ReportViolations(const std::string &label,
                     const std::vector<Violation> &violations,
                     std::ostream &log) {
  for (const auto &v : violations) {
    log << label << ": doc '" << v.doc_id << "': " << v.rule;
    if (!v.detail.empty()) log << " (" << v.detail << ")";
    log << "\n";
  }
  return violations.empty() ? 0 : 1;
}

}  // namespace

Pipeline::Pipeline(RunConfig config)
    : config_(std::move(config)), clients_(MakeClients(config_)) {}

Pipeline::Pipeline(RunConfig config, ClientSet clients)
    : config_(std::move(config)), clients_(std::move(clients)) {}

TemplateConfig Pipeline::Template() const {
  if (config_.template_path.empty()) return TemplateConfig::Defaults();
  return LoadTemplateConfig(config_.Resolve(config_.template_path));
}

std::vector<InstructionRecord> Pipeline::EcpeRecords(SplitTag split) const {
  TemplateConfig tmpl = Template();
  const std::string &corpus_path =
      split == SplitTag::kTrain ? config_.train_path : config_.test_path;
  std::vector<InstructionRecord> records;
  if (!config_.emotional_knowledge) {
    Corpus corpus =
        LoadCorpus(config_.Resolve(corpus_path), config_.corpus_format, split);
    for (const Document &doc : corpus.documents) {
      records.push_back(MakeEcpeRecord(doc, nullptr, tmpl, split));
    }
    return records;
  }
  std::string annotated_path = config_.OutputPath(
      "annotate/" + std::string(SplitTagName(split)) + ".annotated.jsonl");
  if (!fs::exists(annotated_path)) {
    throw ConfigError("missing '" + annotated_path +
                      "'; run the annotate command first");
  }
  for (const AnnotatedDocument &doc :
       ParseAnnotated(ReadFile(annotated_path))) {
    records.push_back(MakeEcpeRecord(doc.document, &doc.knowledge, tmpl, split));
  }
  return records;
}

std::vector<CausalRecord> Pipeline::LoadPool(std::ostream &log) const {
  if (config_.causal_pool_path.empty()) {
    throw ConfigError("config has no causal_pool but the ratio needs one");
  }
  IngestResult pool =
      IngestCausal(ReadFile(config_.Resolve(config_.causal_pool_path)));
  for (const auto &issue : pool.diagnostics) {
    log << "causal pool line " << issue.line << ": " << issue.reason << "\n";
  }
  return std::move(pool.records);
}

int Pipeline::Annotate(std::ostream &log) {
  StageTimer total;
  ordered_json manifest = BaseManifest(config_, clients_, "annotate");
  ordered_json stats;
  ordered_json knowledge_section;
  int exit_code = 0;
  AnnotateOptions options;
  options.workers = config_.workers;
  if (config_.use_cache) options.cache_path = config_.CachePath();

  for (SplitTag split : {SplitTag::kTrain, SplitTag::kTest}) {
    std::string name(SplitTagName(split));
    const std::string &path =
        split == SplitTag::kTrain ? config_.train_path : config_.test_path;
    Corpus corpus =
        LoadCorpus(config_.Resolve(path), config_.corpus_format, split);
    AddInput(manifest, path, config_.Resolve(path));
    if (ReportViolations(name, ValidateCorpus(corpus), log) != 0) return 1;

    StageTimer timer;
    AnnotationResult result = AnnotateCorpus(corpus, clients_, options);
    std::string out;
    for (const auto &doc : result.documents) out += EmitAnnotatedLine(doc) + "\n";
    WriteFile(config_.OutputPath("annotate/" + name + ".annotated.jsonl"), out);

    ordered_json section;
    section["documents"] = corpus.size();
    section["annotated"] = result.documents.size();
    section["none_count"] = result.stats.none_count;
    if (auto rate = result.stats.rate()) {
      section["none_rate"] = *rate;
    } else {
      section["none_rate"] = nullptr;
      section["none_rate_note"] = "undefined for an empty corpus";
    }
    ordered_json failed = ordered_json::array();
    for (const auto &f : result.failures) {
      failed.push_back({{"doc_id", f.doc_id}, {"reason", f.reason}});
      log << name << ": annotation failed for doc '" << f.doc_id
          << "': " << f.reason << "\n";
      int code = ExitCodeFor(f.kind);
      if (code == 2 || exit_code == 0) exit_code = code;
    }
    section["failures"] = std::move(failed);
    knowledge_section[name] = std::move(section);
    stats[name] = {{"elapsed_ms", timer.ElapsedMs()},
                   {"cache_hits", result.cache_hits}};

    log << name << ": annotated " << result.documents.size() << "/"
        << corpus.size() << " documents, none-rate ";
    if (auto rate = result.stats.rate()) {
      log << *rate;
    } else {
      log << "undefined";
    }
    log << " (" << result.cache_hits << " cached)\n";
  }
  knowledge_section["commonsense_input"] = "whitespace-joined clause text";
  knowledge_section["similarity_scores"] = "raw cosine";
  manifest["knowledge"] = std::move(knowledge_section);
  WriteJson(config_.OutputPath("annotate/manifest.json"), manifest);
  stats["total_ms"] = total.ElapsedMs();
  WriteJson(config_.OutputPath("annotate/run_stats.json"), stats);
  return exit_code;
}

int Pipeline::Blend(std::ostream &log) {
  StageTimer timer;
  TemplateConfig tmpl = Template();
  std::vector<InstructionRecord> ecpe = EcpeRecords(SplitTag::kTrain);
  if (ecpe.empty()) {
    log << "blend: no ECPE training records\n";
    return 1;
  }
  Selection selection;
  std::vector<CausalRecord> pool;
  if (config_.ratio.causal_part > 0) {
    pool = LoadPool(log);
    SelectOptions options;
    options.workers = config_.workers;
    selection = SelectCausal(ecpe, pool, config_.ratio, *clients_.embedder,
                             options);
  }
  BlendDataset dataset =
      BlendSelection(ecpe, selection, config_.ratio, config_.seed);

  std::string slug = "blend/blend_" + RatioSlug(config_.ratio);
  WriteFile(config_.OutputPath(slug + ".jsonl"), EmitRecords(dataset.records));

  ordered_json manifest = BaseManifest(config_, clients_, "blend");
  AddInput(manifest, config_.train_path, config_.Resolve(config_.train_path));
  if (!pool.empty()) {
    AddInput(manifest, config_.causal_pool_path,
             config_.Resolve(config_.causal_pool_path));
  }
  if (config_.emotional_knowledge) {
    AddInput(manifest, "annotate/train.annotated.jsonl",
             config_.OutputPath("annotate/train.annotated.jsonl"));
  }
  manifest["emotional_knowledge"] = config_.emotional_knowledge;
  manifest["blend"] = ordered_json::parse(BlendManifest(dataset, tmpl.version));
  manifest["output"] = slug + ".jsonl";
  WriteJson(config_.OutputPath(slug + ".manifest.json"), manifest);
  WriteJson(config_.OutputPath("blend/run_stats.json"),
            ordered_json{{"elapsed_ms", timer.ElapsedMs()}});

  log << "blend " << config_.ratio.ToString() << ": " << dataset.stats.ecpe
      << " ecpe + " << dataset.stats.causal << " causal = "
      << dataset.stats.total << " records";
  if (dataset.shortfall > 0) {
    log << " (shortfall " << dataset.shortfall << " of quota "
        << dataset.quota << ")";
  }
  log << "\n";
  return 0;
}

int Pipeline::SweepRatios(std::ostream &log) {
  StageTimer timer;
  TemplateConfig tmpl = Template();
  std::vector<InstructionRecord> ecpe = EcpeRecords(SplitTag::kTrain);
  if (ecpe.empty()) {
    log << "sweep: no ECPE training records\n";
    return 1;
  }
  bool needs_pool = false;
  for (const auto &r : config_.sweep_ratios) needs_pool |= r.causal_part > 0;
  std::vector<CausalRecord> pool;
  if (needs_pool) pool = LoadPool(log);
  SelectOptions options;
  options.workers = config_.workers;
  std::vector<BlendDataset> datasets =
      Sweep(ecpe, pool, config_.sweep_ratios, config_.seed,
            *clients_.embedder, options);

  ordered_json index = BaseManifest(config_, clients_, "sweep");
  AddInput(index, config_.train_path, config_.Resolve(config_.train_path));
  if (!pool.empty()) {
    AddInput(index, config_.causal_pool_path,
             config_.Resolve(config_.causal_pool_path));
  }
  if (config_.emotional_knowledge) {
    AddInput(index, "annotate/train.annotated.jsonl",
             config_.OutputPath("annotate/train.annotated.jsonl"));
  }
  index["emotional_knowledge"] = config_.emotional_knowledge;
  index["nested"] = true;
  ordered_json entries = ordered_json::array();
  for (const BlendDataset &dataset : datasets) {
    std::string slug = "sweep/blend_" + RatioSlug(dataset.ratio);
    WriteFile(config_.OutputPath(slug + ".jsonl"),
              EmitRecords(dataset.records));
    ordered_json entry = ordered_json::parse(BlendManifest(dataset, tmpl.version));
    entry["output"] = slug + ".jsonl";
    WriteJson(config_.OutputPath(slug + ".manifest.json"), entry);
    entries.push_back(entry);
    log << "sweep " << dataset.ratio.ToString() << ": "
        << dataset.stats.total << " records (" << dataset.stats.causal
        << " causal";
    if (dataset.shortfall > 0) log << ", shortfall " << dataset.shortfall;
    log << ")\n";
  }
  index["entries"] = std::move(entries);
  WriteJson(config_.OutputPath("sweep/manifest.json"), index);
  WriteJson(config_.OutputPath("sweep/run_stats.json"),
            ordered_json{{"elapsed_ms", timer.ElapsedMs()}});
  return 0;
}

int Pipeline::Evaluate(std::ostream &log,
                       const std::optional<std::string> &predictions_path) {
  StageTimer timer;
  Corpus test = LoadCorpus(config_.Resolve(config_.test_path),
                           config_.corpus_format, SplitTag::kTest);
  std::vector<InstructionRecord> records = EcpeRecords(SplitTag::kTest);
  WriteFile(config_.OutputPath("evaluate/test.instructions.jsonl"),
            EmitRecords(records));

  ordered_json manifest = BaseManifest(config_, clients_, "evaluate");
  AddInput(manifest, config_.test_path, config_.Resolve(config_.test_path));
  if (config_.emotional_knowledge) {
    AddInput(manifest, "annotate/test.annotated.jsonl",
             config_.OutputPath("annotate/test.annotated.jsonl"));
  }
  manifest["emotional_knowledge"] = config_.emotional_knowledge;

  std::map<std::string, std::string> predictions;
  if (predictions_path) {
    predictions = ParsePredictions(ReadFile(*predictions_path));
    AddInput(manifest, *predictions_path, *predictions_path);
    manifest["predictions"] = "external";
  } else {
    std::vector<std::pair<std::string, std::string>> outputs(records.size());
    ParallelFor(records.size(), config_.workers, [&](size_t i) {
      outputs[i] = {records[i].meta.at("doc_id"),
                    clients_.completer->Complete(records[i].instruction,
                                                 DecodeOptions::Greedy())};
    });
    WriteFile(config_.OutputPath("evaluate/predictions.jsonl"),
              EmitPredictions(outputs));
    for (auto &[doc_id, output] : outputs) predictions[doc_id] = output;
    manifest["predictions"] = "evaluate/predictions.jsonl";
    manifest["decode"] = "greedy";
  }

  RunReport report =
      EvaluateRun(test, predictions, config_.run_id, "evaluate/manifest.json");
  report.ratio = config_.ratio.ToString();
  WriteFile(config_.OutputPath("evaluate/report.json"), ReportJson(report));
  WriteFile(config_.OutputPath("evaluate/report.txt"), ReportSummary(report));
  manifest["report"] = "evaluate/report.json";
  WriteJson(config_.OutputPath("evaluate/manifest.json"), manifest);
  WriteJson(config_.OutputPath("evaluate/run_stats.json"),
            ordered_json{{"elapsed_ms", timer.ElapsedMs()}});
  log << ReportSummary(report);
  return 0;
}

int CompareReports(const std::vector<std::string> &report_paths,
                   const std::optional<std::string> &output_dir,
                   std::ostream &log) {
  std::vector<RunReport> reports;
  for (const auto &path : report_paths) {
    reports.push_back(ParseReportJson(ReadFile(path)));
  }
  ComparisonTable table = CompareRuns(reports);
  log << table.ToText();
  if (output_dir) {
    WriteFile((fs::path(*output_dir) / "comparison.txt").string(),
              table.ToText());
    WriteFile((fs::path(*output_dir) / "comparison.json").string(),
              table.ToJson());
  }
  return 0;
}

int ValidateCorpora(const std::vector<std::string> &paths, CorpusFormat format,
                    std::ostream &log) {
  int code = 0;
  for (const auto &path : paths) {
    Corpus corpus;
    try {
      corpus = LoadCorpus(path, format);
    } catch (const DataError &e) {
      log << e.what() << "\n";
      code = 1;
      continue;
    }
    auto violations = ValidateCorpus(corpus);
    if (ReportViolations(path, violations, log) != 0) {
      code = 1;
    } else {
      log << path << ": " << corpus.size() << " documents, valid\n";
    }
  }
  return code;
}

}  // namespace ecforge
