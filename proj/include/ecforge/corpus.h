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

#ifndef ECFORGE_CORPUS_H_
#define ECFORGE_CORPUS_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ecforge {

// A pre-segmented clause. Indices are 1-based and contiguous per document.
struct Clause {
  int index = 0;
  std::string text;

  bool operator==(const Clause &) const = default;
};

// (emotion clause, cause clause), both 1-based clause indices.
struct Pair {
  int emotion = 0;
  int cause = 0;

  auto operator<=>(const Pair &) const = default;
};

// Ordered, deduplicated pair set. Ordering is (emotion, cause) ascending.
using PairSet = std::set<Pair>;

struct Document {
  std::string doc_id;
  std::vector<Clause> clauses;
  PairSet gold_pairs;
  std::optional<std::string> emotion_label;

  // Clauses joined by single spaces; the text sent to model services.
  std::string Text() const;

  bool operator==(const Document &) const = default;
};

enum class SplitTag { kTrain, kTest, kUnsplit };

std::string_view SplitTagName(SplitTag tag);
SplitTag ParseSplitTag(std::string_view name);

struct Corpus {
  std::vector<Document> documents;
  SplitTag split_tag = SplitTag::kUnsplit;

  size_t size() const { return documents.size(); }
  bool operator==(const Corpus &) const = default;
};

enum class CorpusFormat { kCanonicalJsonl, kLegacyTabular };

CorpusFormat ParseCorpusFormat(std::string_view name);

// Trims surrounding whitespace and collapses internal whitespace runs
// (including line breaks) to one space. Case is preserved.
std::string NormalizeClauseText(std::string_view text);

// Parses a corpus. Throws DataError listing every malformed line (with
// its 1-based line number), duplicate doc_id and out-of-range pair.
// Empty input yields an empty corpus.
Corpus ParseCorpus(std::string_view raw, CorpusFormat format,
                   SplitTag tag = SplitTag::kUnsplit);

// Canonical JSONL. ParseCorpus(EmitCorpus(c), kCanonicalJsonl) == c.
std::string EmitCorpus(const Corpus &corpus);

// One JSON line for a document (no trailing newline).
std::string EmitDocumentLine(const Document &doc);

struct Violation {
  std::string doc_id;
  std::string rule;
  std::string detail;
};

struct ValidateOptions {
  // Annotated corpora must carry at least one gold pair per document.
  bool require_gold = true;
};

// Checks every Document invariant. Violations are data, never thrown.
std::vector<Violation> ValidateCorpus(const Corpus &corpus,
                                      const ValidateOptions &options = {});

// Deterministic train/test partition. The test side receives
// round(test_fraction * n) documents picked by a seeded Fisher-Yates
// permutation; both sides keep the original document order.
std::pair<Corpus, Corpus> SplitCorpus(const Corpus &corpus,
                                      double test_fraction, uint64_t seed);

// Reads a whole file. Throws ConfigError if it cannot be opened.
std::string ReadFile(const std::string &path);

// Writes a whole file, creating parent directories.
void WriteFile(const std::string &path, std::string_view contents);

Corpus LoadCorpus(const std::string &path, CorpusFormat format,
                  SplitTag tag = SplitTag::kUnsplit);

}  // namespace ecforge

#endif  // ECFORGE_CORPUS_H_
