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

#ifndef ECFORGE_EVAL_H_
#define ECFORGE_EVAL_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ecforge/corpus.h"

namespace ecforge {

struct MatchCounts {
  size_t correct = 0;
  size_t proposed = 0;
  size_t gold = 0;

  MatchCounts &operator+=(const MatchCounts &other) {
    correct += other.correct;
    proposed += other.proposed;
    gold += other.gold;
    return *this;
  }
  bool operator==(const MatchCounts &) const = default;
};

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Exact (emotion, cause) matches: correct = |gold ∩ predicted|,
// proposed = |predicted|, gold = |gold|. Gold must be nonempty.
MatchCounts MatchPairs(const PairSet &gold, const PairSet &predicted);

// Harmonic mean; 0 when precision + recall is 0.
double F1Score(double precision, double recall);

// Micro-averaged metrics from corpus-level counts. P is 0 when nothing was
// proposed. Requires counts.gold > 0.
Metrics Prf1(const MatchCounts &counts);

struct DocResult {
  std::string doc_id;
  PairSet gold;
  PairSet predicted;  // after range filtering
  MatchCounts counts;
  bool missing = false;     // no prediction line for this doc
  bool no_match = false;    // output contained no (e,c) group
  size_t filtered = 0;      // predicted pairs outside the clause range
  size_t duplicates = 0;    // repeated groups in the raw output
};

struct RunReport {
  std::string run_id;
  std::string ratio;         // optional label, e.g. "1:5"
  std::string manifest_ref;  // manifest the run was produced from
  std::vector<DocResult> per_doc;
  MatchCounts totals;
  Metrics metrics;
  size_t missing = 0;
  size_t no_match = 0;
  size_t filtered = 0;
  size_t duplicates = 0;
  std::vector<std::string> anomalies;
};

// Scores raw model outputs (doc_id -> text) against the test corpus.
// Missing outputs score as empty predictions and are flagged; predicted
// indices outside a document's clause range are dropped before counting.
RunReport EvaluateRun(const Corpus &test,
                      const std::map<std::string, std::string> &predictions,
                      std::string run_id, std::string manifest_ref = "");

// Predictions JSONL: {"doc_id": ..., "output": ...} per line.
std::map<std::string, std::string> ParsePredictions(std::string_view raw);
std::string EmitPredictions(
    const std::vector<std::pair<std::string, std::string>> &predictions);

std::string ReportJson(const RunReport &report);
RunReport ParseReportJson(std::string_view raw);
std::string ReportSummary(const RunReport &report);

struct ComparisonRow {
  std::string run_id;
  std::string ratio;
  Metrics metrics;
  MatchCounts totals;
  bool best = false;
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;  // F1 descending, ties by run_id

  // Plain text with a Run / Ratio / P(%) / R(%) / F1(%) layout; best rows
  // carry a trailing '*'.
  std::string ToText() const;
  std::string ToJson() const;
};

// Every row with the maximum F1 is marked best. Throws PreconditionError
// on an empty list.
ComparisonTable CompareRuns(const std::vector<RunReport> &reports);

}  // namespace ecforge

#endif  // ECFORGE_EVAL_H_
