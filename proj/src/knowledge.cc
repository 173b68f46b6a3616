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

#include "ecforge/knowledge.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "ecforge/hashing.h"
#include "ecforge/parallel.h"
#include "ecforge/strings.h"
#include "json.hpp"

namespace ecforge {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void RethrowWithDoc(const std::string &doc_id, const Error &e) {
  throw Error(e.kind(), "doc '" + doc_id + "': " + e.what());
}

ordered_json KnowledgeJson(const EmotionalKnowledge &knowledge) {
  ordered_json out;
  out["kind"] = KnowledgeKindName(knowledge.kind());
  if (const auto *dist = knowledge.distribution()) {
    ordered_json entries = ordered_json::array();
    for (const auto &entry : dist->entries()) {
      entries.push_back({LabelName(entry.label), entry.score});
    }
    out["distribution"] = std::move(entries);
  } else {
    const PolarityVerdict &verdict = *knowledge.polarity();
    out["polarity"] = {{"label", PolarityName(verdict.label)},
                       {"confidence", verdict.confidence}};
  }
  return out;
}

EmotionalKnowledge KnowledgeFromJson(const std::string &doc_id,
                                     const json &object) {
  std::string kind = object.at("kind").get<std::string>();
  if (kind == "distribution") {
    std::vector<LabelScore> entries;
    for (const auto &row : object.at("distribution")) {
      auto label = LabelFromName(row.at(0).get<std::string>());
      if (!label) throw DataError("unknown emotion label in knowledge");
      entries.push_back({*label, row.at(1).get<double>()});
    }
    return {doc_id, LabelDistribution::FromEntries(std::move(entries))};
  }
  if (kind == "polarity") {
    const json &p = object.at("polarity");
    auto label = PolarityFromName(p.at("label").get<std::string>());
    if (!label) throw DataError("bad polarity label in knowledge");
    return {doc_id, PolarityVerdict{*label, p.at("confidence").get<double>()}};
  }
  throw DataError("unknown knowledge kind '" + kind + "'");
}

}  // namespace

double Cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw PreconditionError("cosine: dimension mismatch (" +
                            std::to_string(u.size()) + " vs " +
                            std::to_string(v.size()) + ")");
  }
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) throw PreconditionError("cosine: zero vector");
  return dot / (std::sqrt(uu) * std::sqrt(vv));
}

bool IsNoneReaction(std::string_view reaction) {
  return ToLowerAscii(Trim(reaction)) == "none";
}

LabelDistribution LabelDistribution::FromCanonicalScores(
    const std::array<double, kNumEmotionLabels> &scores) {
  LabelDistribution dist;
  dist.entries_.reserve(kNumEmotionLabels);
  for (size_t i = 0; i < kNumEmotionLabels; ++i) {
    dist.entries_.push_back({kEmotionLabels[i], scores[i]});
  }
  std::stable_sort(dist.entries_.begin(), dist.entries_.end(),
                   [](const LabelScore &a, const LabelScore &b) {
                     return a.score > b.score;
                   });
  return dist;
}

LabelDistribution LabelDistribution::FromEntries(
    std::vector<LabelScore> entries) {
  if (entries.size() != kNumEmotionLabels) {
    throw DataError("label distribution needs exactly 7 entries");
  }
  std::array<bool, kNumEmotionLabels> seen{};
  for (size_t i = 0; i < entries.size(); ++i) {
    auto slot = static_cast<size_t>(entries[i].label);
    if (seen[slot]) throw DataError("label distribution repeats a label");
    seen[slot] = true;
    if (i > 0) {
      const LabelScore &prev = entries[i - 1];
      bool ordered = prev.score > entries[i].score ||
                     (prev.score == entries[i].score &&
                      prev.label < entries[i].label);
      if (!ordered) throw DataError("label distribution is not sorted");
    }
  }
  LabelDistribution dist;
  dist.entries_ = std::move(entries);
  return dist;
}

std::string_view KnowledgeKindName(KnowledgeKind kind) {
  return kind == KnowledgeKind::kDistribution ? "distribution" : "polarity";
}

CommonsenseResult FetchCommonsense(const Document &doc,
                                   ModelClient &generator) {
  CommonsenseResult result;
  result.doc_id = doc.doc_id;
  try {
    result.reaction = generator.GenerateReaction(doc.Text());
  } catch (const Error &e) {
    RethrowWithDoc(doc.doc_id, e);
  }
  result.is_none = IsNoneReaction(result.reaction);
  return result;
}

LabelDistribution ScoreLabels(std::string_view reaction,
                              ModelClient &embedder) {
  if (Trim(reaction).empty() || IsNoneReaction(reaction)) {
    throw PreconditionError("score_labels: reaction is empty or none");
  }
  std::vector<std::string> batch;
  batch.reserve(kNumEmotionLabels + 1);
  batch.emplace_back(reaction);
  for (EmotionLabel label : kEmotionLabels) {
    batch.emplace_back(LabelName(label));
  }
  std::vector<EmbeddingVector> vectors = embedder.Embed(batch);
  std::array<double, kNumEmotionLabels> scores{};
  for (size_t j = 0; j < kNumEmotionLabels; ++j) {
    scores[j] = Cosine(vectors[0], vectors[j + 1]);
  }
  return LabelDistribution::FromCanonicalScores(scores);
}

EmotionalKnowledge KnowledgeFromCommonsense(const Document &doc,
                                            const CommonsenseResult &cs,
                                            ModelClient &embedder,
                                            ModelClient &polarity) {
  try {
    if (!cs.is_none) {
      return {doc.doc_id, ScoreLabels(cs.reaction, embedder)};
    }
    return {doc.doc_id, polarity.ClassifyPolarity(doc.Text())};
  } catch (const Error &e) {
    RethrowWithDoc(doc.doc_id, e);
  }
}

EmotionalKnowledge BuildKnowledge(const Document &doc,
                                  const ClientSet &clients) {
  return AnnotateDocument(doc, clients).knowledge;
}

AnnotatedDocument AnnotateDocument(const Document &doc,
                                   const ClientSet &clients) {
  CommonsenseResult cs = FetchCommonsense(doc, *clients.generator);
  EmotionalKnowledge knowledge =
      KnowledgeFromCommonsense(doc, cs, *clients.embedder, *clients.polarity);
  return {doc, std::move(knowledge), std::move(cs)};
}

std::string KnowledgeContentHash(const Document &doc,
                                 const ClientSet &clients) {
  std::string key = clients.generator->Fingerprint() + "|" +
                    clients.embedder->Fingerprint() + "|" +
                    clients.polarity->Fingerprint() + "\n" + doc.Text();
  return ContentHash(key);
}

KnowledgeCache::KnowledgeCache(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_);
  if (!in) return;  // a missing cache is an empty cache
  std::string line;
  while (std::getline(in, line)) {
    if (Trim(line).empty()) continue;
    json record = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (!record.is_object() || record.value("v", 0) != kVersion) continue;
    if (!record.contains("doc_id") || !record.contains("content_hash")) {
      continue;
    }
    entries_[{record["doc_id"].get<std::string>(),
              record["content_hash"].get<std::string>()}] = line;
  }
}

size_t KnowledgeCache::size() const {
  std::shared_lock lock(mu_);
  return entries_.size();
}

std::optional<std::pair<CommonsenseResult, EmotionalKnowledge>>
KnowledgeCache::Find(const std::string &doc_id,
                     const std::string &content_hash) const {
  std::string line;
  {
    std::shared_lock lock(mu_);
    auto it = entries_.find({doc_id, content_hash});
    if (it == entries_.end()) return std::nullopt;
    line = it->second;
  }
  try {
    json record = json::parse(line);
    const json &payload = record.at("payload");
    CommonsenseResult cs;
    cs.doc_id = doc_id;
    cs.reaction = payload.at("reaction").get<std::string>();
    cs.is_none = IsNoneReaction(cs.reaction);
    json knowledge = payload;
    knowledge["kind"] = record.at("kind");
    return std::make_pair(cs, KnowledgeFromJson(doc_id, knowledge));
  } catch (const std::exception &) {
    return std::nullopt;  // unreadable entries are recomputed
  }
}

void KnowledgeCache::Put(const std::string &content_hash,
                         const CommonsenseResult &cs,
                         const EmotionalKnowledge &knowledge) {
  ordered_json k = KnowledgeJson(knowledge);
  ordered_json payload;
  payload["reaction"] = cs.reaction;
  if (k.contains("distribution")) payload["distribution"] = k["distribution"];
  if (k.contains("polarity")) payload["polarity"] = k["polarity"];
  ordered_json record;
  record["v"] = kVersion;
  record["doc_id"] = knowledge.doc_id;
  record["content_hash"] = content_hash;
  record["kind"] = k["kind"];
  record["payload"] = std::move(payload);
  std::string line = record.dump();

  std::unique_lock lock(mu_);
  entries_[{knowledge.doc_id, content_hash}] = line;
  pending_.push_back(std::move(line));
}

void KnowledgeCache::Flush() {
  std::unique_lock lock(mu_);
  if (pending_.empty()) return;
  std::filesystem::path p(path_);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path_, std::ios::app | std::ios::binary);
  if (!out) throw ConfigError("cannot write knowledge cache '" + path_ + "'");
  for (const auto &line : pending_) out << line << '\n';
  pending_.clear();
}

AnnotationResult AnnotateCorpus(const Corpus &corpus, const ClientSet &clients,
                                const AnnotateOptions &options) {
  std::optional<KnowledgeCache> cache;
  if (options.cache_path) cache.emplace(*options.cache_path);

  const size_t n = corpus.size();
  std::vector<std::optional<AnnotatedDocument>> done(n);
  std::vector<std::optional<AnnotationFailure>> failed(n);
  std::vector<std::string> hashes(n);
  std::vector<char> from_cache(n, 0);

  ParallelFor(n, options.workers, [&](size_t i) {
    const Document &doc = corpus.documents[i];
    if (cache) {
      hashes[i] = KnowledgeContentHash(doc, clients);
      if (auto hit = cache->Find(doc.doc_id, hashes[i])) {
        done[i] = AnnotatedDocument{doc, std::move(hit->second),
                                    std::move(hit->first)};
        from_cache[i] = 1;
        return;
      }
    }
    try {
      done[i] = AnnotateDocument(doc, clients);
    } catch (const Error &e) {
      failed[i] = AnnotationFailure{doc.doc_id, e.kind(), e.what()};
    }
  });

  AnnotationResult result;
  for (size_t i = 0; i < n; ++i) {
    if (failed[i]) {
      result.failures.push_back(std::move(*failed[i]));
      continue;
    }
    AnnotatedDocument &annotated = *done[i];
    if (from_cache[i]) {
      ++result.cache_hits;
    } else if (cache) {
      cache->Put(hashes[i], annotated.commonsense, annotated.knowledge);
    }
    ++result.stats.total;
    if (annotated.commonsense.is_none) ++result.stats.none_count;
    result.documents.push_back(std::move(annotated));
  }
  if (cache) cache->Flush();
  return result;
}

std::string EmitAnnotatedLine(const AnnotatedDocument &doc) {
  ordered_json record = ordered_json::parse(EmitDocumentLine(doc.document));
  record["commonsense"] = {{"reaction", doc.commonsense.reaction},
                           {"is_none", doc.commonsense.is_none}};
  record["knowledge"] = KnowledgeJson(doc.knowledge);
  return record.dump();
}

std::vector<AnnotatedDocument> ParseAnnotated(std::string_view raw) {
  Corpus corpus = ParseCorpus(raw, CorpusFormat::kCanonicalJsonl);
  std::vector<AnnotatedDocument> out;
  out.reserve(corpus.size());
  size_t k = 0;
  size_t start = 0;
  int lineno = 0;
  while (start < raw.size()) {
    size_t end = raw.find('\n', start);
    if (end == std::string_view::npos) end = raw.size();
    std::string_view line = raw.substr(start, end - start);
    start = end + 1;
    ++lineno;
    if (Trim(line).empty()) continue;
    try {
      json record = json::parse(line);
      Document &doc = corpus.documents.at(k++);
      AnnotatedDocument annotated;
      annotated.commonsense.doc_id = doc.doc_id;
      annotated.commonsense.reaction =
          record.at("commonsense").at("reaction").get<std::string>();
      annotated.commonsense.is_none =
          IsNoneReaction(annotated.commonsense.reaction);
      annotated.knowledge = KnowledgeFromJson(doc.doc_id, record.at("knowledge"));
      annotated.document = std::move(doc);
      out.push_back(std::move(annotated));
    } catch (const DataError &e) {
      throw DataError("line " + std::to_string(lineno) + ": " + e.what(),
                      {{lineno, e.what()}});
    } catch (const std::exception &e) {
      throw DataError("line " + std::to_string(lineno) +
                          ": malformed annotated record: " + e.what(),
                      {{lineno, e.what()}});
    }
  }
  return out;
}

}  // namespace ecforge
