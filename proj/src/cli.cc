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

#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "ecforge/errors.h"
#include "ecforge/pipeline.h"
#include "ecforge/wire.h"

namespace ecforge {

namespace {

void AddOverrideFlags(CLI::App *cmd, std::string &config_path,
                      ConfigOverrides &overrides) {
  cmd->add_option("-c,--config", config_path, "Run config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", overrides.seed, "Override the config seed");
  cmd->add_option("--workers", overrides.workers, "Override worker count");
  cmd->add_option("--output-dir", overrides.output_dir,
                  "Override the output directory");
  cmd->add_option("--run-id", overrides.run_id, "Override the run id");
  cmd->add_option("--ratio", overrides.ratio, "Mix ratio, e.g. 1:5");
  cmd->add_flag("--no-emotional-knowledge", overrides.no_emotional_knowledge,
                "Render templates without emotional knowledge");
  cmd->add_flag("--no-causal-knowledge", overrides.no_causal_knowledge,
                "Use ratio 1:0 (no causal records)");
}

}  // namespace

int RunCli(int argc, const char *const *argv, std::ostream &out,
           std::ostream &err) {
  CLI::App app{"Emotion-cause pair extraction dataset forge and scorer",
               "ecforge"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  std::string config_path;
  ConfigOverrides overrides;

  auto *annotate = app.add_subcommand(
      "annotate", "Attach emotional knowledge to the train and test corpora");
  AddOverrideFlags(annotate, config_path, overrides);

  auto *blend = app.add_subcommand(
      "blend", "Render instructions and mix in selected causal records");
  AddOverrideFlags(blend, config_path, overrides);

  auto *sweep =
      app.add_subcommand("sweep", "Emit one nested blend per sweep ratio");
  AddOverrideFlags(sweep, config_path, overrides);
  std::vector<std::string> sweep_ratios;
  sweep->add_option("--ratios", sweep_ratios, "Ratios to sweep")
      ->delimiter(',');

  auto *evaluate = app.add_subcommand(
      "evaluate", "Score predictions on the test split");
  AddOverrideFlags(evaluate, config_path, overrides);
  std::string predictions_path;
  evaluate
      ->add_option("--predictions", predictions_path,
                   "Predictions JSONL; without it the completer is queried")
      ->check(CLI::ExistingFile);

  auto *compare =
      app.add_subcommand("compare", "Compare run reports (report.json)");
  std::vector<std::string> report_paths;
  compare->add_option("reports", report_paths, "report.json files")
      ->required()
      ->check(CLI::ExistingFile);
  std::string compare_out;
  compare->add_option("--output-dir", compare_out,
                      "Write comparison.txt and comparison.json here");

  auto *validate =
      app.add_subcommand("validate", "Parse and validate corpus files");
  std::vector<std::string> corpus_paths;
  validate->add_option("corpora", corpus_paths, "Corpus files")
      ->check(CLI::ExistingFile);
  std::string validate_config;
  validate->add_option("-c,--config", validate_config,
                       "Validate the corpora named in a run config");
  std::string format_name = "canonical-jsonl";
  validate->add_option("--format", format_name,
                       "canonical-jsonl or legacy-tabular");

  auto *split = app.add_subcommand(
      "split", "Deterministically split an unsplit corpus into train/test");
  std::string split_input, split_train, split_test;
  double test_fraction = 0.2;
  uint64_t split_seed = 0;
  split->add_option("input", split_input, "Corpus file")
      ->required()
      ->check(CLI::ExistingFile);
  split->add_option("--test-fraction", test_fraction, "Fraction in (0,1)");
  split->add_option("--seed", split_seed, "Shuffle seed")->required();
  split->add_option("--train-out", split_train, "Train output")->required();
  split->add_option("--test-out", split_test, "Test output")->required();
  split->add_option("--format", format_name,
                    "canonical-jsonl or legacy-tabular");

  auto *serve = app.add_subcommand(
      "serve-mock", "Serve the deterministic mock over the wire protocol");
  std::string host = "127.0.0.1";
  int port = 8080;
  MockOptions mock_options;
  std::vector<std::string> gold_corpora;
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port");
  serve->add_option("--dim", mock_options.dim, "Embedding dimension");
  serve->add_option("--none-fraction", mock_options.none_fraction,
                    "Fraction of texts whose reaction is \"none\"");
  serve->add_option("--gold", gold_corpora,
                    "Corpora whose gold answers /v1/complete echoes")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : ExitCodeFor(ErrorKind::kConfig);
  }

  try {
    if (*annotate) {
      return Pipeline(LoadRunConfig(config_path, overrides)).Annotate(out);
    }
    if (*blend) {
      return Pipeline(LoadRunConfig(config_path, overrides)).Blend(out);
    }
    if (*sweep) {
      RunConfig config = LoadRunConfig(config_path, overrides);
      if (!sweep_ratios.empty()) {
        config.sweep_ratios.clear();
        for (const auto &r : sweep_ratios) {
          config.sweep_ratios.push_back(MixRatio::Parse(r));
        }
      }
      return Pipeline(std::move(config)).SweepRatios(out);
    }
    if (*evaluate) {
      std::optional<std::string> preds;
      if (!predictions_path.empty()) preds = predictions_path;
      return Pipeline(LoadRunConfig(config_path, overrides))
          .Evaluate(out, preds);
    }
    if (*compare) {
      std::optional<std::string> dir;
      if (!compare_out.empty()) dir = compare_out;
      return CompareReports(report_paths, dir, out);
    }
    if (*validate) {
      CorpusFormat format = ParseCorpusFormat(format_name);
      std::vector<std::string> paths = corpus_paths;
      if (!validate_config.empty()) {
        RunConfig config = LoadRunConfig(validate_config);
        format = config.corpus_format;
        paths.push_back(config.Resolve(config.train_path));
        paths.push_back(config.Resolve(config.test_path));
      }
      if (paths.empty()) {
        err << "validate: give corpus files or --config\n";
        return ExitCodeFor(ErrorKind::kConfig);
      }
      return ValidateCorpora(paths, format, out);
    }
    if (*split) {
      Corpus corpus = LoadCorpus(split_input, ParseCorpusFormat(format_name));
      auto [train, test] = SplitCorpus(corpus, test_fraction, split_seed);
      WriteFile(split_train, EmitCorpus(train));
      WriteFile(split_test, EmitCorpus(test));
      out << "split: " << train.size() << " train, " << test.size()
          << " test\n";
      return 0;
    }
    if (*serve) {
      auto mock = std::make_shared<MockModelClient>(mock_options);
      std::map<std::string, std::string> gold;
      for (const auto &path : gold_corpora) {
        for (const Document &doc :
             LoadCorpus(path, CorpusFormat::kCanonicalJsonl).documents) {
          if (!doc.gold_pairs.empty()) {
            gold[doc.doc_id] = RenderResponse(doc.gold_pairs);
          }
        }
      }
      mock->SetGoldResponses(std::move(gold));
      wire::Server server(mock);
      out << "serving " << mock->Fingerprint() << " on " << host << ":"
          << port << std::endl;
      server.Run(host, port);
      return 0;
    }
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return ExitCodeFor(e.kind());
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace ecforge
