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

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "ecforge/errors.h"
#include "json.hpp"
#include "oracles.h"

namespace ecforge {
namespace {

std::vector<InstructionRecord> Ecpe(size_t n) {
  std::vector<InstructionRecord> out;
  const char *topics[] = {"rain and floods", "a lost dog", "exam results",
                          "a broken laptop", "the wedding day"};
  for (size_t i = 0; i < n; ++i) {
    InstructionRecord r;
    r.record_id = "ecpe:e" + std::to_string(i);
    r.instruction = std::string("Document about ") + topics[i % 5] + " #" +
                    std::to_string(i);
    r.response = "(1,1)";
    r.meta["doc_id"] = "e" + std::to_string(i);
    out.push_back(r);
  }
  return out;
}

std::vector<CausalRecord> Pool(size_t n) {
  std::vector<CausalRecord> out;
  const char *words[] = {"rain", "flood", "dog", "exam", "laptop",
                         "wedding", "storm", "river", "cake", "train"};
  for (size_t i = 0; i < n; ++i) {
    char id[16];
    std::snprintf(id, sizeof(id), "p%04zu", i);
    out.push_back({id,
                   std::string("Why did the ") + words[i % 10] + " matter " +
                       std::to_string(i / 10) + "?",
                   "because", std::nullopt});
  }
  return out;
}

std::vector<std::string> Ids(const std::vector<CausalRecord> &pool) {
  std::vector<std::string> ids;
  for (const auto &r : pool) ids.push_back(r.causal_id);
  return ids;
}

TEST(MixRatioTest, ParseAndPrint) {
  EXPECT_EQ(MixRatio::Parse("1:5"), (MixRatio{1, 5}));
  EXPECT_EQ(MixRatio::Parse("10"), (MixRatio{1, 10}));
  EXPECT_EQ(MixRatio::Parse(" 1 : 0 "), (MixRatio{1, 0}));
  EXPECT_EQ((MixRatio{1, 2}).ToString(), "1:2");
  EXPECT_THROW(MixRatio::Parse("2:5"), ConfigError);
  EXPECT_THROW(MixRatio::Parse("1:-1"), ConfigError);
  EXPECT_THROW(MixRatio::Parse("x"), ConfigError);
  std::vector<int> parts;
  for (const auto &r : StandardRatios()) parts.push_back(r.causal_part);
  EXPECT_EQ(parts, (std::vector<int>{1, 2, 5, 10}));
}

TEST(IngestCausalTest, GoodLines) {
  std::string raw =
      R"({"causal_id":"a","instruction":"i","response":"r"})" "\n"
      R"({"causal_id":"b","instruction":"i","response":"r","task_tag":"t"})" "\n"
      R"({"causal_id":"c","instruction":"i","response":"r"})" "\n";
  IngestResult r = IngestCausal(raw);
  EXPECT_EQ(r.records.size(), 3u);
  EXPECT_TRUE(r.diagnostics.empty());
  EXPECT_EQ(r.records[1].task_tag, "t");
  EXPECT_EQ(IngestCausal(EmitCausalRecords(r.records)).records, r.records);
}

TEST(IngestCausalTest, MalformedLineIsDiagnostic) {
  std::string raw =
      R"({"causal_id":"a","instruction":"i","response":"r"})" "\n"
      "{broken\n"
      R"({"causal_id":"b","instruction":"i","response":"r"})" "\n";
  IngestResult r = IngestCausal(raw);
  EXPECT_EQ(r.records.size(), 2u);
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].line, 2);
}

TEST(IngestCausalTest, DuplicatesAndEmpties) {
  std::string raw =
      R"({"causal_id":"a","instruction":"i","response":"r"})" "\n"
      R"({"causal_id":"a","instruction":"j","response":"r"})" "\n"
      R"({"causal_id":"b","instruction":"","response":"r"})" "\n";
  IngestResult r = IngestCausal(raw);
  EXPECT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.diagnostics.size(), 2u);
}

TEST(IngestCausalTest, EmptyIsError) {
  EXPECT_THROW(IngestCausal(""), DataError);
  EXPECT_THROW(IngestCausal("{}\n"), DataError);
}

TEST(RoundRobinPickTest, HandExample) {
  // Two ECPE rows, four pool entries.
  std::vector<std::vector<double>> sim = {{0.9, 0.8, 0.1, 0.0},
                                          {0.9, 0.2, 0.7, 0.7}};
  std::vector<std::string> ids = {"a", "b", "c", "d"};
  EXPECT_EQ(RoundRobinPick(sim, ids, 4), (std::vector<size_t>{0, 2, 1, 3}));
  EXPECT_EQ(RoundRobinPick(sim, ids, 3), (std::vector<size_t>{0, 2, 1}));
  EXPECT_EQ(RoundRobinPick(sim, ids, 9).size(), 4u);
  EXPECT_TRUE(RoundRobinPick(sim, ids, 0).empty());
}

TEST(RoundRobinPickTest, TiesByCausalId) {
  std::vector<std::vector<double>> sim = {{0.5, 0.5, 0.5}};
  std::vector<std::string> ids = {"z", "a", "m"};
  EXPECT_EQ(RoundRobinPick(sim, ids, 3), (std::vector<size_t>{1, 2, 0}));
}

TEST(SelectCausalTest, QuotaArithmetic) {
  MockModelClient mock;
  Selection s = SelectCausal(Ecpe(4), Pool(100), {1, 2}, mock);
  EXPECT_EQ(s.records.size(), 8u);
  EXPECT_EQ(s.quota, 8u);
  EXPECT_EQ(s.shortfall, 0u);
  std::set<std::string> ids;
  for (const auto &r : s.records) ids.insert(r.causal_id);
  EXPECT_EQ(ids.size(), 8u);
  EXPECT_TRUE(std::is_sorted(s.records.begin(), s.records.end(),
                             [](const auto &a, const auto &b) {
                               return a.causal_id < b.causal_id;
                             }));
}

TEST(SelectCausalTest, Shortfall) {
  MockModelClient mock;
  Selection s = SelectCausal(Ecpe(4), Pool(10), {1, 5}, mock);
  EXPECT_EQ(s.records.size(), 10u);
  EXPECT_EQ(s.quota, 20u);
  EXPECT_EQ(s.shortfall, 10u);
}

TEST(SelectCausalTest, Preconditions) {
  MockModelClient mock;
  EXPECT_THROW(SelectCausal({}, Pool(3), {1, 1}, mock), PreconditionError);
  EXPECT_THROW(SelectCausal(Ecpe(3), {}, {1, 1}, mock), PreconditionError);
}

TEST(SelectCausalTest, MatchesBruteForce) {
  MockModelClient mock;
  auto ecpe = Ecpe(7);
  auto pool = Pool(60);
  std::vector<std::vector<double>> sim;
  for (const auto &e : ecpe) {
    std::vector<double> row;
    auto ev = oracle::Embed(e.instruction);
    for (const auto &p : pool) row.push_back(oracle::Cos(ev, oracle::Embed(p.instruction)));
    sim.push_back(row);
  }
  for (int k : {1, 2, 5, 10}) {
    Selection s = SelectCausal(ecpe, pool, {1, k}, mock);
    auto picks = oracle::Select(sim, Ids(pool), static_cast<size_t>(k) * 7);
    EXPECT_EQ(s.pick_order, picks) << "1:" << k;
  }
}

TEST(SelectCausalTest, BatchingAndWorkersDoNotChangeResult) {
  MockModelClient mock;
  auto ecpe = Ecpe(9);
  auto pool = Pool(50);
  Selection base = SelectCausal(ecpe, pool, {1, 3}, mock);
  Selection other = SelectCausal(ecpe, pool, {1, 3}, mock, {.batch_size = 7, .workers = 4});
  EXPECT_EQ(base.pick_order, other.pick_order);
}

TEST(BlendTest, Stats) {
  MockModelClient mock;
  auto ecpe = Ecpe(120);
  Selection s = SelectCausal(ecpe, Pool(700), {1, 5}, mock);
  BlendDataset d = BlendSelection(ecpe, s, {1, 5}, 9);
  EXPECT_EQ(d.stats.ecpe, 120u);
  EXPECT_EQ(d.stats.causal, 600u);
  EXPECT_EQ(d.stats.total, 720u);
  EXPECT_EQ(d.records.size(), 720u);
}

TEST(BlendTest, SeedControlsOrderOnly) {
  auto ecpe = Ecpe(10);
  auto causal = Pool(30);
  BlendDataset a = Blend(ecpe, causal, 1);
  BlendDataset b = Blend(ecpe, causal, 1);
  BlendDataset c = Blend(ecpe, causal, 2);
  EXPECT_EQ(EmitRecords(a.records), EmitRecords(b.records));
  EXPECT_NE(EmitRecords(a.records), EmitRecords(c.records));
  auto ids = [](const BlendDataset &d) {
    std::multiset<std::string> out;
    for (const auto &r : d.records) out.insert(r.record_id);
    return out;
  };
  EXPECT_EQ(ids(a), ids(c));
}

TEST(BlendTest, WrapsCausal) {
  BlendDataset d = Blend(Ecpe(1), {{"c9", "Why?", "Because.", "explain"}}, 3);
  ASSERT_EQ(d.records.size(), 2u);
  auto it = std::find_if(d.records.begin(), d.records.end(), [](const auto &r) {
    return r.source == RecordSource::kCausal;
  });
  ASSERT_NE(it, d.records.end());
  EXPECT_EQ(it->record_id, "causal:c9");
  EXPECT_EQ(it->meta.at("causal_id"), "c9");
  EXPECT_EQ(it->meta.at("task_tag"), "explain");
}

TEST(BlendTest, Errors) {
  EXPECT_THROW(Blend({}, Pool(2), 1), PreconditionError);
  auto ecpe = Ecpe(2);
  ecpe[1].record_id = ecpe[0].record_id;
  EXPECT_THROW(Blend(ecpe, Pool(2), 1), DataError);
}

TEST(SweepTest, NestedAndCounted) {
  MockModelClient mock;
  auto ecpe = Ecpe(6);
  auto pool = Pool(200);
  auto sets = Sweep(ecpe, pool, StandardRatios(), 5, mock);
  ASSERT_EQ(sets.size(), 4u);
  std::vector<std::set<std::string>> chosen;
  for (const auto &d : sets) {
    std::set<std::string> ids;
    for (const auto &r : d.records) {
      if (r.source == RecordSource::kCausal) ids.insert(r.record_id);
    }
    EXPECT_EQ(ids.size(), static_cast<size_t>(d.ratio.causal_part) * 6);
    chosen.push_back(ids);
  }
  for (size_t i = 1; i < chosen.size(); ++i) {
    EXPECT_TRUE(std::includes(chosen[i].begin(), chosen[i].end(),
                              chosen[i - 1].begin(), chosen[i - 1].end()));
  }
  // Each sweep entry equals a direct selection at that ratio.
  for (const auto &d : sets) {
    Selection s = SelectCausal(ecpe, pool, d.ratio, mock);
    EXPECT_EQ(EmitRecords(d.records),
              EmitRecords(BlendSelection(ecpe, s, d.ratio, 5).records));
  }
}

TEST(SweepTest, EmptyRatioList) {
  MockModelClient mock;
  EXPECT_THROW(Sweep(Ecpe(2), Pool(5), {}, 1, mock), PreconditionError);
}

TEST(SweepTest, ZeroRatioNeedsNoPool) {
  MockModelClient mock;
  auto sets = Sweep(Ecpe(3), {}, {{1, 0}}, 1, mock);
  ASSERT_EQ(sets.size(), 1u);
  EXPECT_EQ(sets[0].stats.causal, 0u);
  EXPECT_EQ(mock.calls().embed, 0u);
}

TEST(BlendManifestTest, Fields) {
  BlendDataset d = Blend(Ecpe(2), Pool(3), 77);
  d.ratio = {1, 2};
  d.quota = 4;
  d.shortfall = 1;
  auto m = nlohmann::json::parse(BlendManifest(d, "v1"));
  EXPECT_EQ(m["seed"], 77);
  EXPECT_EQ(m["ratio"], "1:2");
  EXPECT_EQ(m["shortfall"], 1);
  EXPECT_EQ(m["stats"]["total"], 5);
  EXPECT_EQ(m["template_version"], "v1");
  EXPECT_EQ(m["selection_rule"], std::string(kSelectionRule));
}

}  // namespace
}  // namespace ecforge
