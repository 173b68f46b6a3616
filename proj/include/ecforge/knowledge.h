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

#ifndef ECFORGE_KNOWLEDGE_H_
#define ECFORGE_KNOWLEDGE_H_

#include <array>
#include <cstddef>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ecforge/clients.h"
#include "ecforge/corpus.h"
#include "ecforge/emotion_labels.h"
#include "ecforge/errors.h"

namespace ecforge {

// dot(u, v) / (|u| |v|). Throws PreconditionError on a dimension
// mismatch or an all-zero vector.
double Cosine(std::span<const double> u, std::span<const double> v);

inline double Cosine(const EmbeddingVector &u, const EmbeddingVector &v) {
  return Cosine(std::span<const double>(u.values),
                std::span<const double>(v.values));
}

// True when the trimmed, ASCII-case-folded reaction equals "none".
bool IsNoneReaction(std::string_view reaction);

struct CommonsenseResult {
  std::string doc_id;
  std::string reaction;
  bool is_none = false;

  bool operator==(const CommonsenseResult &) const = default;
};

struct LabelScore {
  EmotionLabel label;
  double score;

  bool operator==(const LabelScore &) const = default;
};

// All seven labels sorted by score, high to low; equal scores keep
// canonical label order.
class LabelDistribution {
 public:
  // scores[i] belongs to kEmotionLabels[i].
  static LabelDistribution FromCanonicalScores(
      const std::array<double, kNumEmotionLabels> &scores);

  // Rebuilds from stored entries; throws DataError unless they form a
  // valid distribution.
  static LabelDistribution FromEntries(std::vector<LabelScore> entries);

  const std::vector<LabelScore> &entries() const { return entries_; }
  const LabelScore &top() const { return entries_.front(); }

  bool operator==(const LabelDistribution &) const = default;

 private:
  std::vector<LabelScore> entries_;
};

enum class KnowledgeKind { kDistribution, kPolarity };

std::string_view KnowledgeKindName(KnowledgeKind kind);

// Per-document emotional knowledge: a label distribution when the
// commonsense reaction is usable, a polarity verdict when it is "none".
struct EmotionalKnowledge {
  std::string doc_id;
  std::variant<LabelDistribution, PolarityVerdict> value;

  KnowledgeKind kind() const {
    return value.index() == 0 ? KnowledgeKind::kDistribution
                              : KnowledgeKind::kPolarity;
  }
  const LabelDistribution *distribution() const {
    return std::get_if<LabelDistribution>(&value);
  }
  const PolarityVerdict *polarity() const {
    return std::get_if<PolarityVerdict>(&value);
  }

  bool operator==(const EmotionalKnowledge &) const = default;
};

struct AnnotatedDocument {
  Document document;
  EmotionalKnowledge knowledge;
  CommonsenseResult commonsense;

  bool operator==(const AnnotatedDocument &) const = default;
};

// Queries the xReact reaction for the whole document text. Client
// failures are rethrown with the doc_id prepended.
CommonsenseResult FetchCommonsense(const Document &doc, ModelClient &generator);

// Embeds the reaction and the seven label names in one batch (reaction
// first, labels in canonical order) and ranks labels by cosine.
LabelDistribution ScoreLabels(std::string_view reaction, ModelClient &embedder);

// Distribution for a usable reaction, polarity of the document otherwise.
EmotionalKnowledge KnowledgeFromCommonsense(const Document &doc,
                                            const CommonsenseResult &cs,
                                            ModelClient &embedder,
                                            ModelClient &polarity);

EmotionalKnowledge BuildKnowledge(const Document &doc,
                                  const ClientSet &clients);

AnnotatedDocument AnnotateDocument(const Document &doc,
                                   const ClientSet &clients);

struct NoneRateStats {
  size_t total = 0;
  size_t none_count = 0;

  // Undefined for an empty corpus.
  std::optional<double> rate() const {
    if (total == 0) return std::nullopt;
    return static_cast<double>(none_count) / static_cast<double>(total);
  }
};

struct AnnotationFailure {
  std::string doc_id;
  ErrorKind kind;
  std::string reason;
};

struct AnnotationResult {
  std::vector<AnnotatedDocument> documents;  // input order, failures omitted
  NoneRateStats stats;
  std::vector<AnnotationFailure> failures;
  size_t cache_hits = 0;
};

struct AnnotateOptions {
  std::optional<std::string> cache_path;
  int workers = 1;
};

// Content address of a document's knowledge: hash over the client
// fingerprints and the document text.
std::string KnowledgeContentHash(const Document &doc, const ClientSet &clients);

// Line-delimited store of annotations keyed by (doc_id, content_hash).
// Record layout (version 1):
//   {"v":1,"doc_id":...,"content_hash":...,"kind":"distribution"|"polarity",
//    "payload":{"reaction":...,"distribution":[[label,score],...]} |
//              {"reaction":...,"polarity":{"label":...,"confidence":...}}}
// Lookups take a shared lock; Put and Flush are serialized.
class KnowledgeCache {
 public:
  static constexpr int kVersion = 1;

  explicit KnowledgeCache(std::string path);

  const std::string &path() const { return path_; }
  size_t size() const;

  std::optional<std::pair<CommonsenseResult, EmotionalKnowledge>> Find(
      const std::string &doc_id, const std::string &content_hash) const;

  void Put(const std::string &content_hash, const CommonsenseResult &cs,
           const EmotionalKnowledge &knowledge);

  // Appends records added since the last flush, in Put order.
  void Flush();

 private:
  std::string path_;
  mutable std::shared_mutex mu_;
  std::map<std::pair<std::string, std::string>, std::string> entries_;
  std::vector<std::string> pending_;
};

// Annotates every document (bounded parallelism, output in input order).
// Documents whose client calls fail are listed in failures and skipped.
AnnotationResult AnnotateCorpus(const Corpus &corpus, const ClientSet &clients,
                                const AnnotateOptions &options = {});

// Annotated corpus JSONL: the canonical document fields plus
// "commonsense" and "knowledge".
std::string EmitAnnotatedLine(const AnnotatedDocument &doc);
std::vector<AnnotatedDocument> ParseAnnotated(std::string_view raw);

}  // namespace ecforge

#endif  // ECFORGE_KNOWLEDGE_H_
