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

#include "ecforge/blend.h"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <set>
#include <sstream>

#include "ecforge/knowledge.h"
#include "ecforge/parallel.h"
#include "ecforge/shuffle.h"
#include "ecforge/strings.h"
#include "json.hpp"

namespace ecforge {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::vector<EmbeddingVector> EmbedAll(const std::vector<std::string> &texts,
                                      ModelClient &embedder,
                                      const SelectOptions &options) {
  const size_t batch = std::max<size_t>(options.batch_size, 1);
  const size_t chunks = (texts.size() + batch - 1) / batch;
  std::vector<std::vector<EmbeddingVector>> parts(chunks);
  ParallelFor(chunks, options.workers, [&](size_t c) {
    size_t begin = c * batch;
    size_t end = std::min(texts.size(), begin + batch);
    std::vector<std::string> slice(texts.begin() + begin, texts.begin() + end);
    parts[c] = embedder.Embed(slice);
  });
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (auto &part : parts) {
    for (auto &v : part) out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

std::string MixRatio::ToString() const {
  return std::to_string(ecpe_part) + ":" + std::to_string(causal_part);
}

MixRatio MixRatio::Parse(std::string_view text) {
  text = Trim(text);
  std::string_view causal = text;
  size_t colon = text.find(':');
  if (colon != std::string_view::npos) {
    if (Trim(text.substr(0, colon)) != "1") {
      throw ConfigError("mix ratio must be 1:k, got '" + std::string(text) +
                        "'");
    }
    causal = Trim(text.substr(colon + 1));
  }
  int k = -1;
  auto [ptr, ec] = std::from_chars(causal.data(),
                                   causal.data() + causal.size(), k);
  if (ec != std::errc() || ptr != causal.data() + causal.size() || k < 0) {
    throw ConfigError("bad mix ratio '" + std::string(text) + "'");
  }
  return {1, k};
}

std::vector<MixRatio> StandardRatios() {
  return {{1, 1}, {1, 2}, {1, 5}, {1, 10}};
}

IngestResult IngestCausal(std::string_view raw) {
  IngestResult result;
  std::set<std::string> seen;
  std::istringstream in{std::string(raw)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (Trim(line).empty()) continue;
    auto issue = [&](const std::string &reason) {
      result.diagnostics.push_back({lineno, reason});
    };
    json object = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (!object.is_object()) {
      issue("malformed causal record: not a JSON object");
      continue;
    }
    auto str = [&](const char *key) -> std::optional<std::string> {
      auto it = object.find(key);
      if (it == object.end() || !it->is_string()) return std::nullopt;
      return it->get<std::string>();
    };
    CausalRecord record;
    auto id = str("causal_id");
    auto instruction = str("instruction");
    auto response = str("response");
    if (!id || id->empty()) {
      issue("malformed causal record: missing causal_id");
      continue;
    }
    if (!instruction || Trim(*instruction).empty() || !response ||
        Trim(*response).empty()) {
      issue("malformed causal record '" + *id +
            "': instruction and response must be nonempty strings");
      continue;
    }
    if (!seen.insert(*id).second) {
      issue("duplicate causal_id '" + *id + "'");
      continue;
    }
    record.causal_id = *id;
    record.instruction = *instruction;
    record.response = *response;
    record.task_tag = str("task_tag");
    result.records.push_back(std::move(record));
  }
  if (result.records.empty()) {
    throw DataError("causal pool has no valid records",
                    std::move(result.diagnostics));
  }
  return result;
}

std::string EmitCausalRecords(const std::vector<CausalRecord> &records) {
  std::string out;
  for (const auto &record : records) {
    ordered_json line;
    line["causal_id"] = record.causal_id;
    line["instruction"] = record.instruction;
    line["response"] = record.response;
    if (record.task_tag) line["task_tag"] = *record.task_tag;
    out += line.dump();
    out += '\n';
  }
  return out;
}

std::vector<size_t> RoundRobinPick(const std::vector<std::vector<double>> &sim,
                                   const std::vector<std::string> &pool_ids,
                                   size_t quota) {
  const size_t pool_size = pool_ids.size();
  const size_t limit = std::min(quota, pool_size);
  std::vector<size_t> picks;
  if (limit == 0 || sim.empty()) return picks;

  std::vector<std::vector<size_t>> ranking(sim.size());
  for (size_t e = 0; e < sim.size(); ++e) {
    auto &order = ranking[e];
    order.resize(pool_size);
    std::iota(order.begin(), order.end(), 0);
    const auto &row = sim[e];
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      if (row[a] != row[b]) return row[a] > row[b];
      return pool_ids[a] < pool_ids[b];
    });
  }

  std::vector<char> taken(pool_size, 0);
  std::vector<size_t> cursor(sim.size(), 0);
  picks.reserve(limit);
  while (picks.size() < limit) {
    for (size_t e = 0; e < sim.size() && picks.size() < limit; ++e) {
      size_t &c = cursor[e];
      while (c < pool_size && taken[ranking[e][c]]) ++c;
      if (c == pool_size) continue;
      size_t p = ranking[e][c];
      taken[p] = 1;
      picks.push_back(p);
    }
  }
  return picks;
}

std::vector<std::vector<double>> SimilarityMatrix(
    const std::vector<InstructionRecord> &ecpe,
    const std::vector<CausalRecord> &pool, ModelClient &embedder,
    const SelectOptions &options) {
  std::vector<std::string> ecpe_texts, pool_texts;
  ecpe_texts.reserve(ecpe.size());
  pool_texts.reserve(pool.size());
  for (const auto &r : ecpe) ecpe_texts.push_back(r.instruction);
  for (const auto &r : pool) pool_texts.push_back(r.instruction);
  auto ecpe_vecs = EmbedAll(ecpe_texts, embedder, options);
  auto pool_vecs = EmbedAll(pool_texts, embedder, options);

  std::vector<std::vector<double>> sim(ecpe.size(),
                                       std::vector<double>(pool.size()));
  for (size_t e = 0; e < ecpe.size(); ++e) {
    for (size_t p = 0; p < pool.size(); ++p) {
      sim[e][p] = Cosine(ecpe_vecs[e], pool_vecs[p]);
    }
  }
  return sim;
}

namespace {

Selection SelectionFromPicks(const std::vector<CausalRecord> &pool,
                             std::vector<size_t> picks, size_t quota) {
  Selection selection;
  selection.quota = quota;
  selection.pick_order = std::move(picks);
  for (size_t p : selection.pick_order) selection.records.push_back(pool[p]);
  std::sort(selection.records.begin(), selection.records.end(),
            [](const CausalRecord &a, const CausalRecord &b) {
              return a.causal_id < b.causal_id;
            });
  selection.shortfall = quota - selection.records.size();
  return selection;
}

std::vector<std::string> PoolIds(const std::vector<CausalRecord> &pool) {
  std::vector<std::string> ids;
  ids.reserve(pool.size());
  for (const auto &r : pool) ids.push_back(r.causal_id);
  return ids;
}

}  // namespace

Selection SelectCausal(const std::vector<InstructionRecord> &ecpe,
                       const std::vector<CausalRecord> &pool, MixRatio ratio,
                       ModelClient &embedder, const SelectOptions &options) {
  if (ecpe.empty()) throw PreconditionError("select_causal: no ECPE records");
  size_t quota = static_cast<size_t>(ratio.causal_part) * ecpe.size();
  if (quota == 0) return SelectionFromPicks(pool, {}, 0);
  if (pool.empty()) throw PreconditionError("select_causal: empty pool");
  auto sim = SimilarityMatrix(ecpe, pool, embedder, options);
  return SelectionFromPicks(pool, RoundRobinPick(sim, PoolIds(pool), quota),
                            quota);
}

InstructionRecord WrapCausal(const CausalRecord &record) {
  InstructionRecord wrapped;
  wrapped.record_id = "causal:" + record.causal_id;
  wrapped.source = RecordSource::kCausal;
  wrapped.instruction = record.instruction;
  wrapped.response = record.response;
  wrapped.meta["causal_id"] = record.causal_id;
  if (record.task_tag) wrapped.meta["task_tag"] = *record.task_tag;
  return wrapped;
}

BlendDataset Blend(const std::vector<InstructionRecord> &ecpe,
                   const std::vector<CausalRecord> &causal, uint64_t seed) {
  if (ecpe.empty()) throw PreconditionError("blend: no ECPE records");
  BlendDataset dataset;
  dataset.seed = seed;
  dataset.records = ecpe;
  dataset.records.reserve(ecpe.size() + causal.size());
  std::vector<CausalRecord> sorted = causal;
  std::sort(sorted.begin(), sorted.end(),
            [](const CausalRecord &a, const CausalRecord &b) {
              return a.causal_id < b.causal_id;
            });
  for (const auto &record : sorted) dataset.records.push_back(WrapCausal(record));

  std::set<std::string> ids;
  for (const auto &record : dataset.records) {
    if (!ids.insert(record.record_id).second) {
      throw DataError("record_id collision: '" + record.record_id + "'");
    }
  }
  SeededShuffle(dataset.records, seed);
  dataset.stats = {ecpe.size(), sorted.size(), ecpe.size() + sorted.size()};
  return dataset;
}

BlendDataset BlendSelection(const std::vector<InstructionRecord> &ecpe,
                            const Selection &selection, MixRatio ratio,
                            uint64_t seed) {
  BlendDataset dataset = Blend(ecpe, selection.records, seed);
  dataset.ratio = ratio;
  dataset.quota = selection.quota;
  dataset.shortfall = selection.shortfall;
  return dataset;
}

std::vector<BlendDataset> Sweep(const std::vector<InstructionRecord> &ecpe,
                                const std::vector<CausalRecord> &pool,
                                const std::vector<MixRatio> &ratios,
                                uint64_t seed, ModelClient &embedder,
                                const SelectOptions &options) {
  if (ratios.empty()) throw PreconditionError("sweep: empty ratio list");
  if (ecpe.empty()) throw PreconditionError("sweep: no ECPE records");
  size_t max_quota = 0;
  for (const MixRatio &r : ratios) {
    if (r.causal_part < 0) throw PreconditionError("sweep: negative ratio");
    max_quota = std::max(max_quota,
                         static_cast<size_t>(r.causal_part) * ecpe.size());
  }
  std::vector<size_t> picks;
  if (max_quota > 0) {
    if (pool.empty()) throw PreconditionError("sweep: empty pool");
    auto sim = SimilarityMatrix(ecpe, pool, embedder, options);
    picks = RoundRobinPick(sim, PoolIds(pool), max_quota);
  }
  std::vector<BlendDataset> out;
  out.reserve(ratios.size());
  for (const MixRatio &r : ratios) {
    size_t quota = static_cast<size_t>(r.causal_part) * ecpe.size();
    size_t take = std::min(quota, picks.size());
    std::vector<size_t> prefix(picks.begin(), picks.begin() + take);
    out.push_back(BlendSelection(
        ecpe, SelectionFromPicks(pool, std::move(prefix), quota), r, seed));
  }
  return out;
}

std::string BlendManifest(const BlendDataset &dataset,
                          std::string_view template_version) {
  ordered_json manifest;
  manifest["seed"] = dataset.seed;
  manifest["ratio"] = dataset.ratio.ToString();
  manifest["stats"] = {{"ecpe", dataset.stats.ecpe},
                       {"causal", dataset.stats.causal},
                       {"total", dataset.stats.total}};
  manifest["quota"] = dataset.quota;
  manifest["shortfall"] = dataset.shortfall;
  manifest["template_version"] = template_version;
  manifest["selection_rule"] = kSelectionRule;
  manifest["shuffle"] = kShuffleRule;
  return manifest.dump(2) + "\n";
}

}  // namespace ecforge
