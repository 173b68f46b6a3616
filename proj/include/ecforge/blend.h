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

#ifndef ECFORGE_BLEND_H_
#define ECFORGE_BLEND_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ecforge/clients.h"
#include "ecforge/errors.h"
#include "ecforge/instruction.h"

namespace ecforge {

// General-corpus record used as causal knowledge.
struct CausalRecord {
  std::string causal_id;
  std::string instruction;
  std::string response;
  std::optional<std::string> task_tag;

  bool operator==(const CausalRecord &) const = default;
};

// ecpe_part is always 1; causal_part = 0 disables causal injection.
struct MixRatio {
  int ecpe_part = 1;
  int causal_part = 0;

  std::string ToString() const;  // "1:5"
  static MixRatio Parse(std::string_view text);  // "1:5" or "5"

  bool operator==(const MixRatio &) const = default;
};

// The ratio sweep 1:1, 1:2, 1:5, 1:10.
std::vector<MixRatio> StandardRatios();

struct IngestResult {
  std::vector<CausalRecord> records;   // file order
  std::vector<LineIssue> diagnostics;  // skipped lines
};

// Parses causal-record JSONL: {causal_id, instruction, response,
// task_tag?}. Bad lines become diagnostics; zero valid records is a
// DataError.
IngestResult IngestCausal(std::string_view raw);

std::string EmitCausalRecords(const std::vector<CausalRecord> &records);

struct Selection {
  std::vector<CausalRecord> records;  // sorted by causal_id
  std::vector<size_t> pick_order;     // pool indices, in selection order
  size_t quota = 0;
  size_t shortfall = 0;  // quota - selected when the pool runs out
};

// Round-robin best-match selection without replacement. sim[e][p] is the
// similarity of ECPE record e to pool entry p. Each ECPE record ranks the
// pool by similarity (descending; ties by causal_id ascending). Rounds
// visit the ECPE records in order and each takes its best pool entry not
// yet taken, until `quota` entries are taken or the pool is exhausted.
// The sequence does not depend on the quota, so a smaller quota always
// selects a prefix of a larger one.
std::vector<size_t> RoundRobinPick(const std::vector<std::vector<double>> &sim,
                                   const std::vector<std::string> &pool_ids,
                                   size_t quota);

struct SelectOptions {
  size_t batch_size = 64;  // texts per embedding request
  int workers = 1;
};

// Cosine similarity of every ECPE instruction to every pool instruction.
std::vector<std::vector<double>> SimilarityMatrix(
    const std::vector<InstructionRecord> &ecpe,
    const std::vector<CausalRecord> &pool, ModelClient &embedder,
    const SelectOptions &options = {});

// Selects ratio.causal_part * |ecpe| causal records (fewer, with a
// shortfall, when the pool is smaller).
Selection SelectCausal(const std::vector<InstructionRecord> &ecpe,
                       const std::vector<CausalRecord> &pool, MixRatio ratio,
                       ModelClient &embedder,
                       const SelectOptions &options = {});

// A causal record as an instruction record; record_id "causal:<id>".
InstructionRecord WrapCausal(const CausalRecord &record);

struct BlendStats {
  size_t ecpe = 0;
  size_t causal = 0;
  size_t total = 0;
};

struct BlendDataset {
  std::vector<InstructionRecord> records;
  BlendStats stats;
  uint64_t seed = 0;
  MixRatio ratio;
  size_t quota = 0;
  size_t shortfall = 0;
};

// Concatenates ECPE records (given order) and wrapped causal records
// (causal_id order), then applies SeededShuffle(seed). Throws DataError on
// a record_id collision.
BlendDataset Blend(const std::vector<InstructionRecord> &ecpe,
                   const std::vector<CausalRecord> &causal, uint64_t seed);

// Blend with selection bookkeeping filled in.
BlendDataset BlendSelection(const std::vector<InstructionRecord> &ecpe,
                            const Selection &selection, MixRatio ratio,
                            uint64_t seed);

// One dataset per ratio. Similarities are computed once; every ratio takes
// a prefix of the same pick sequence, so selections are nested.
std::vector<BlendDataset> Sweep(const std::vector<InstructionRecord> &ecpe,
                                const std::vector<CausalRecord> &pool,
                                const std::vector<MixRatio> &ratios,
                                uint64_t seed, ModelClient &embedder,
                                const SelectOptions &options = {});

// Sidecar manifest: seed, ratio, stats, quota, shortfall, template
// version and the selection rule.
std::string BlendManifest(const BlendDataset &dataset,
                          std::string_view template_version);

inline constexpr std::string_view kSelectionRule =
    "round-robin best cosine match per ECPE instruction, without "
    "replacement, ties by causal_id";
inline constexpr std::string_view kShuffleRule = "mt19937_64 Fisher-Yates";

}  // namespace ecforge

#endif  // ECFORGE_BLEND_H_
