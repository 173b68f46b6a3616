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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ecforge/blend.h"
#include "ecforge/corpus.h"
#include "ecforge/errors.h"
#include "ecforge/eval.h"
#include "ecforge/instruction.h"
#include "ecforge/knowledge.h"

namespace py = pybind11;

namespace ecforge {
namespace {

using PairList = std::vector<std::pair<int, int>>;

PairList ToList(const PairSet &pairs) {
  PairList out;
  for (const Pair &p : pairs) out.emplace_back(p.emotion, p.cause);
  return out;
}

PairSet ToSet(const PairList &pairs) {
  PairSet out;
  for (const auto &[e, c] : pairs) out.insert({e, c});
  return out;
}

std::vector<std::pair<std::string, double>> DistributionList(
    const LabelDistribution &dist) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto &entry : dist.entries()) {
    out.emplace_back(std::string(LabelName(entry.label)), entry.score);
  }
  return out;
}

}  // namespace
}  // namespace ecforge

PYBIND11_MODULE(_ecforge, m) {
  using namespace ecforge;
  m.doc() = "Emotion-cause pair extraction dataset forge and scorer";

  static py::exception<Error> error(m, "EcforgeError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error &e) {
      py::set_error(error, e.what());
    }
  });

  py::class_<Document>(m, "Document")
      .def(py::init([](std::string doc_id, std::vector<std::string> clauses,
                       const PairList &pairs,
                       std::optional<std::string> emotion) {
             Document doc;
             doc.doc_id = std::move(doc_id);
             for (auto &text : clauses) {
               doc.clauses.push_back({static_cast<int>(doc.clauses.size()) + 1,
                                      NormalizeClauseText(text)});
             }
             doc.gold_pairs = ToSet(pairs);
             doc.emotion_label = std::move(emotion);
             return doc;
           }),
           py::arg("doc_id"), py::arg("clauses"), py::arg("pairs"),
           py::arg("emotion") = py::none())
      .def_readonly("doc_id", &Document::doc_id)
      .def_property_readonly("clauses",
                             [](const Document &d) {
                               std::vector<std::string> out;
                               for (const auto &c : d.clauses) out.push_back(c.text);
                               return out;
                             })
      .def_property_readonly(
          "gold_pairs", [](const Document &d) { return ToList(d.gold_pairs); })
      .def_readonly("emotion", &Document::emotion_label)
      .def("text", &Document::Text)
      .def("__eq__", [](const Document &a, const Document &b) { return a == b; });

  py::class_<Corpus>(m, "Corpus")
      .def_property_readonly("documents",
                             [](const Corpus &c) { return c.documents; })
      .def_property_readonly("split_tag", [](const Corpus &c) {
        return std::string(SplitTagName(c.split_tag));
      })
      .def("__len__", &Corpus::size)
      .def("__eq__", [](const Corpus &a, const Corpus &b) { return a == b; });

  m.def(
      "parse_corpus",
      [](const std::string &raw, const std::string &format) {
        return ParseCorpus(raw, ParseCorpusFormat(format));
      },
      py::arg("raw"), py::arg("format") = "canonical-jsonl");
  m.def("emit_corpus", &EmitCorpus);
  m.def("validate_corpus", [](const Corpus &corpus) {
    std::vector<std::tuple<std::string, std::string, std::string>> out;
    for (const auto &v : ValidateCorpus(corpus)) {
      out.emplace_back(v.doc_id, v.rule, v.detail);
    }
    return out;
  });
  m.def("split_corpus", &SplitCorpus, py::arg("corpus"),
        py::arg("test_fraction"), py::arg("seed"));

  py::class_<ModelClient, std::shared_ptr<ModelClient>>(m, "ModelClient")
      .def("generate_reaction", &ModelClient::GenerateReaction,
           py::call_guard<py::gil_scoped_release>())
      .def("embed",
           [](ModelClient &c, const std::vector<std::string> &texts) {
             std::vector<std::vector<double>> out;
             for (auto &v : c.Embed(texts)) out.push_back(std::move(v.values));
             return out;
           },
           py::call_guard<py::gil_scoped_release>())
      .def("classify_polarity",
           [](ModelClient &c, const std::string &text) {
             PolarityVerdict v = c.ClassifyPolarity(text);
             return std::make_pair(std::string(PolarityName(v.label)),
                                   v.confidence);
           },
           py::call_guard<py::gil_scoped_release>())
      .def(
          "complete",
          [](ModelClient &c, const std::string &instruction,
             std::optional<uint64_t> seed) {
            return c.Complete(instruction, seed ? DecodeOptions::Sampled(*seed)
                                                : DecodeOptions::Greedy());
          },
          py::arg("instruction"), py::arg("seed") = py::none(), py::call_guard<py::gil_scoped_release>())
      .def("fingerprint", &ModelClient::Fingerprint);

  py::class_<MockModelClient, ModelClient, std::shared_ptr<MockModelClient>>(
      m, "MockClient")
      .def(py::init([](size_t dim, double none_fraction) {
             return std::make_shared<MockModelClient>(
                 MockOptions{dim, none_fraction});
           }),
           py::arg("dim") = 64, py::arg("none_fraction") = 0.43)
      .def("set_gold_responses", &MockModelClient::SetGoldResponses)
      .def("in_none_bucket", &MockModelClient::InNoneBucket)
      .def("call_count",
           [](const MockModelClient &c) { return c.calls().total(); });

  py::class_<HttpModelClient, ModelClient, std::shared_ptr<HttpModelClient>>(
      m, "HttpClient")
      .def(py::init([](std::string base_url, int timeout_ms, int max_retries,
                       std::optional<std::string> token) {
             return std::make_shared<HttpModelClient>(InferenceEndpoint{
                 std::move(base_url), timeout_ms, max_retries, token});
           }),
           py::arg("base_url"), py::arg("timeout_ms") = 30000,
           py::arg("max_retries") = 2, py::arg("auth_token") = py::none());

  m.def("cosine", [](const std::vector<double> &u,
                     const std::vector<double> &v) {
    return Cosine(std::span<const double>(u), std::span<const double>(v));
  });
  m.def("score_labels", [](const std::string &reaction, ModelClient &embedder) {
    return DistributionList(ScoreLabels(reaction, embedder));
  });

  py::class_<AnnotatedDocument>(m, "AnnotatedDocument")
      .def_readonly("document", &AnnotatedDocument::document)
      .def_property_readonly(
          "reaction",
          [](const AnnotatedDocument &a) { return a.commonsense.reaction; })
      .def_property_readonly("kind",
                             [](const AnnotatedDocument &a) {
                               return std::string(
                                   KnowledgeKindName(a.knowledge.kind()));
                             })
      .def_property_readonly(
          "distribution",
          [](const AnnotatedDocument &a) -> py::object {
            if (const auto *d = a.knowledge.distribution()) {
              return py::cast(DistributionList(*d));
            }
            return py::none();
          })
      .def_property_readonly(
          "polarity",
          [](const AnnotatedDocument &a) -> py::object {
            if (const auto *p = a.knowledge.polarity()) {
              return py::cast(std::make_pair(
                  std::string(PolarityName(p->label)), p->confidence));
            }
            return py::none();
          })
      .def("to_json", &EmitAnnotatedLine);

  m.def(
      "annotate_corpus",
      [](const Corpus &corpus, std::shared_ptr<ModelClient> client,
         int workers) {
        AnnotateOptions options;
        options.workers = workers;
        AnnotationResult r;
        {
          py::gil_scoped_release release;
          r = AnnotateCorpus(corpus, ClientSet::Uniform(client), options);
        }
        py::dict stats;
        stats["total"] = r.stats.total;
        stats["none_count"] = r.stats.none_count;
        stats["none_rate"] = r.stats.rate();
        std::vector<std::pair<std::string, std::string>> failures;
        for (const auto &f : r.failures) failures.emplace_back(f.doc_id, f.reason);
        stats["failures"] = failures;
        return py::make_tuple(r.documents, stats);
      },
      py::arg("corpus"), py::arg("client"), py::arg("workers") = 1);

  py::class_<InstructionRecord>(m, "InstructionRecord")
      .def_readonly("record_id", &InstructionRecord::record_id)
      .def_property_readonly("source",
                             [](const InstructionRecord &r) {
                               return std::string(RecordSourceName(r.source));
                             })
      .def_readonly("instruction", &InstructionRecord::instruction)
      .def_readonly("response", &InstructionRecord::response)
      .def_readonly("meta", &InstructionRecord::meta)
      .def("to_json", &EmitRecordLine);

  m.def(
      "ecpe_record",
      [](const AnnotatedDocument &a, bool with_knowledge) {
        return MakeEcpeRecord(a.document,
                              with_knowledge ? &a.knowledge : nullptr,
                              TemplateConfig::Defaults(), SplitTag::kTrain);
      },
      py::arg("annotated"), py::arg("with_knowledge") = true);
  m.def("render_response", [](const PairList &pairs) {
    return RenderResponse(ToSet(pairs));
  });
  m.def("parse_pairs", [](const std::string &text) {
    ParsedPairs parsed = ParsePairs(text);
    return py::make_tuple(ToList(parsed.pairs), parsed.no_match);
  });

  py::class_<CausalRecord>(m, "CausalRecord")
      .def(py::init([](std::string id, std::string instruction,
                       std::string response, std::optional<std::string> tag) {
             return CausalRecord{std::move(id), std::move(instruction),
                                 std::move(response), std::move(tag)};
           }),
           py::arg("causal_id"), py::arg("instruction"), py::arg("response"),
           py::arg("task_tag") = py::none())
      .def_readonly("causal_id", &CausalRecord::causal_id)
      .def_readonly("instruction", &CausalRecord::instruction)
      .def_readonly("response", &CausalRecord::response)
      .def_readonly("task_tag", &CausalRecord::task_tag);

  m.def("ingest_causal", [](const std::string &raw) {
    return IngestCausal(raw).records;
  });
  m.def(
      "select_causal",
      [](const std::vector<InstructionRecord> &ecpe,
         const std::vector<CausalRecord> &pool, int causal_part,
         ModelClient &embedder) {
        Selection s;
        {
          py::gil_scoped_release release;
          s = SelectCausal(ecpe, pool, {1, causal_part}, embedder);
        }
        return py::make_tuple(s.records, s.shortfall);
      },
      py::arg("ecpe"), py::arg("pool"), py::arg("causal_part"),
      py::arg("embedder"));
  m.def("blend",
        [](const std::vector<InstructionRecord> &ecpe,
           const std::vector<CausalRecord> &causal, uint64_t seed) {
          return Blend(ecpe, causal, seed).records;
        },
        py::arg("ecpe"), py::arg("causal"), py::arg("seed"));

  m.def("match_pairs", [](const PairList &gold, const PairList &predicted) {
    MatchCounts c = MatchPairs(ToSet(gold), ToSet(predicted));
    return py::make_tuple(c.correct, c.proposed, c.gold);
  });
  m.def("prf1", [](size_t correct, size_t proposed, size_t gold) {
    Metrics mt = Prf1({correct, proposed, gold});
    return py::make_tuple(mt.precision, mt.recall, mt.f1);
  });
  m.def("f1_score", &F1Score, py::arg("precision"), py::arg("recall"));
  m.def(
      "evaluate_run",
      [](const Corpus &test, const std::map<std::string, std::string> &preds,
         const std::string &run_id) {
        return ReportJson(EvaluateRun(test, preds, run_id));
      },
      py::arg("test"), py::arg("predictions"), py::arg("run_id") = "run");
}
