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

#ifndef ECFORGE_PIPELINE_H_
#define ECFORGE_PIPELINE_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ecforge/blend.h"
#include "ecforge/clients.h"
#include "ecforge/corpus.h"
#include "ecforge/instruction.h"

namespace ecforge {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kAuthTokenEnv = "ECFORGE_AUTH_TOKEN";

// "mock" or an HTTP endpoint.
using EndpointSetting = std::variant<std::monostate, InferenceEndpoint>;

// One versioned JSON file drives every command. Relative paths resolve
// against the config file's directory. See docs/config.md.
struct RunConfig {
  static constexpr int kVersion = 1;

  std::string config_dir;  // base for relative paths

  // Paths as written in the config file.
  std::string train_path;
  std::string test_path;
  std::string causal_pool_path;  // optional
  std::string template_path;     // optional; defaults when empty
  CorpusFormat corpus_format = CorpusFormat::kCanonicalJsonl;

  EndpointSetting generator;
  EndpointSetting embedder;
  EndpointSetting polarity;
  EndpointSetting completer;
  MockOptions mock;

  MixRatio ratio{1, 5};
  std::vector<MixRatio> sweep_ratios = StandardRatios();
  uint64_t seed = 0;
  int workers = 1;
  std::string output_dir = "out";
  bool use_cache = true;
  std::string cache_path;  // default <output_dir>/cache/knowledge.jsonl
  bool emotional_knowledge = true;
  std::string run_id = "run";

  // Resolves a config-relative path.
  std::string Resolve(const std::string &path) const;

  std::string OutputPath(const std::string &relative) const;
  std::string CachePath() const;

  // Effective values as pretty JSON with stable key order.
  std::string SnapshotJson() const;
};

// Command-line values that override config keys.
struct ConfigOverrides {
  std::optional<uint64_t> seed;
  std::optional<std::string> ratio;
  std::optional<int> workers;
  std::optional<std::string> output_dir;
  std::optional<std::string> run_id;
  bool no_emotional_knowledge = false;
  bool no_causal_knowledge = false;
};

// Parses and checks a config. Throws ConfigError for unknown versions,
// missing keys (the seed is mandatory) and referenced files that do not
// exist.
RunConfig ParseRunConfig(std::string_view text, const std::string &config_dir,
                         const ConfigOverrides &overrides = {});
RunConfig LoadRunConfig(const std::string &path,
                        const ConfigOverrides &overrides = {});

// Builds clients for each role; "mock" roles share one MockModelClient.
// The auth token, if any, comes from ECFORGE_AUTH_TOKEN.
ClientSet MakeClients(const RunConfig &config);

// Commands. Each writes its artifacts plus manifest.json (deterministic)
// and run_stats.json (timings and cache counters, not deterministic) under
// <output_dir>/<stage>/, logs a summary to `log` and returns an exit code:
// 0 success, 1 data error, 2 transport error, 3 config error.
class Pipeline {
 public:
  explicit Pipeline(RunConfig config);
  Pipeline(RunConfig config, ClientSet clients);

  const RunConfig &config() const { return config_; }
  const ClientSet &clients() const { return clients_; }

  int Annotate(std::ostream &log);
  int Blend(std::ostream &log);
  int SweepRatios(std::ostream &log);
  int Evaluate(std::ostream &log,
               const std::optional<std::string> &predictions_path = {});

 private:
  TemplateConfig Template() const;
  std::vector<InstructionRecord> EcpeRecords(SplitTag split) const;
  std::vector<CausalRecord> LoadPool(std::ostream &log) const;

  RunConfig config_;
  ClientSet clients_;
};

// Reads report.json files and writes the comparison (text to `log`;
// files too when output_dir is given).
int CompareReports(const std::vector<std::string> &report_paths,
                   const std::optional<std::string> &output_dir,
                   std::ostream &log);

// Parses and validates corpus files; one line per violation.
int ValidateCorpora(const std::vector<std::string> &paths, CorpusFormat format,
                    std::ostream &log);

// Full command line: ecforge <command> [options]. Returns the exit code.
int RunCli(int argc, const char *const *argv, std::ostream &out,
           std::ostream &err);

}  // namespace ecforge

#endif  // ECFORGE_PIPELINE_H_
