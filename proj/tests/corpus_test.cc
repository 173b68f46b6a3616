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

#include "ecforge/corpus.h"

#include <gtest/gtest.h>

#include <set>

#include "ecforge/errors.h"
#include "test_util.h"

namespace ecforge {
namespace {

using testutil::SourcePath;

Document MakeDoc(std::string id, std::vector<std::string> clauses,
                 PairSet pairs) {
  Document doc;
  doc.doc_id = std::move(id);
  int i = 0;
  for (auto &text : clauses) doc.clauses.push_back({++i, std::move(text)});
  doc.gold_pairs = std::move(pairs);
  return doc;
}

TEST(ParseCorpusTest, CanonicalThreeDocs) {
  std::string raw =
      R"({"doc_id":"d1","clauses":["a","b","c"],"pairs":[[3,2]]})" "\n"
      R"({"doc_id":"d2","clauses":["x","y"],"pairs":[[1,1]],"emotion":"fear"})" "\n"
      R"({"doc_id":"d3","clauses":["p","q","r","s","t"],"pairs":[[3,2],[5,5]]})" "\n";
  Corpus c = ParseCorpus(raw, CorpusFormat::kCanonicalJsonl);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c.documents[0].doc_id, "d1");
  EXPECT_EQ(c.documents[2].doc_id, "d3");
  EXPECT_EQ(c.documents[2].gold_pairs, (PairSet{{3, 2}, {5, 5}}));
  EXPECT_EQ(c.documents[1].emotion_label, "fear");
  EXPECT_EQ(c.documents[0].clauses[2].index, 3);
}

TEST(ParseCorpusTest, OutOfRangePairNamesLine) {
  std::string raw =
      R"({"doc_id":"ok","clauses":["a","b"],"pairs":[[1,2]]})" "\n"
      R"({"doc_id":"bad","clauses":["a","b","c","d"],"pairs":[[7,1]]})" "\n";
  try {
    ParseCorpus(raw, CorpusFormat::kCanonicalJsonl);
    FAIL() << "expected DataError";
  } catch (const DataError &e) {
    ASSERT_EQ(e.issues().size(), 1u);
    EXPECT_EQ(e.issues()[0].line, 2);
    EXPECT_NE(e.issues()[0].reason.find("out of range"), std::string::npos);
  }
}

TEST(ParseCorpusTest, ReportsEveryMalformedLine) {
  std::string raw = "not json\n"
                    R"({"doc_id":"a","clauses":["x","y"],"pairs":[[1,1]]})" "\n"
                    R"({"doc_id":"b","clauses":"x","pairs":[]})" "\n"
                    R"({"doc_id":"a","clauses":["x","y"],"pairs":[[1,1]]})" "\n";
  try {
    ParseCorpus(raw, CorpusFormat::kCanonicalJsonl);
    FAIL() << "expected DataError";
  } catch (const DataError &e) {
    std::set<int> lines;
    for (const auto &issue : e.issues()) lines.insert(issue.line);
    EXPECT_EQ(lines, (std::set<int>{1, 3, 4}));
  }
}

TEST(ParseCorpusTest, EmptyInputIsEmptyCorpus) {
  EXPECT_EQ(ParseCorpus("", CorpusFormat::kCanonicalJsonl).size(), 0u);
  EXPECT_EQ(ParseCorpus("\n\n", CorpusFormat::kCanonicalJsonl).size(), 0u);
}

TEST(ParseCorpusTest, NormalizesClauseWhitespace) {
  EXPECT_EQ(NormalizeClauseText("  Mara  was\n\tterrified "),
            "Mara was terrified");
  std::string raw =
      R"({"doc_id":"d","clauses":["  A  b ","C\td"],"pairs":[[1,2]]})";
  Corpus c = ParseCorpus(raw, CorpusFormat::kCanonicalJsonl);
  EXPECT_EQ(c.documents[0].clauses[0].text, "A b");
  EXPECT_EQ(c.documents[0].clauses[1].text, "C d");
}

TEST(ParseCorpusTest, RoundTripToyCorpus) {
  for (const char *name : {"data/toy/train.jsonl", "data/toy/test.jsonl"}) {
    Corpus c = LoadCorpus(SourcePath(name), CorpusFormat::kCanonicalJsonl);
    Corpus again = ParseCorpus(EmitCorpus(c), CorpusFormat::kCanonicalJsonl);
    EXPECT_EQ(again, c) << name;
  }
}

TEST(ParseCorpusTest, LegacyTabularFixture) {
  Corpus c = LoadCorpus(SourcePath("data/toy/legacy_sample.txt"),
                        CorpusFormat::kLegacyTabular);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.documents[0].doc_id, "1");
  EXPECT_EQ(c.documents[0].clauses.size(), 4u);
  EXPECT_EQ(c.documents[0].gold_pairs, (PairSet{{3, 4}}));
  EXPECT_EQ(c.documents[0].emotion_label, "fear");
  EXPECT_EQ(c.documents[1].gold_pairs, (PairSet{{2, 1}, {3, 1}}));
  EXPECT_EQ(c.documents[1].clauses[2].text, "I am still sad about it");
  // Legacy and canonical agree after a canonical round trip.
  EXPECT_EQ(ParseCorpus(EmitCorpus(c), CorpusFormat::kCanonicalJsonl), c);
}

TEST(ParseCorpusTest, LegacyClauseCountMismatch) {
  std::string raw = "7 3\n(1, 2)\n1,null,null,a\n2,null,null,b\n";
  EXPECT_THROW(ParseCorpus(raw, CorpusFormat::kLegacyTabular), DataError);
}

TEST(ValidateCorpusTest, ToyCorpusIsValid) {
  Corpus c = LoadCorpus(SourcePath("data/toy/train.jsonl"),
                        CorpusFormat::kCanonicalJsonl);
  EXPECT_EQ(c.size(), 20u);
  EXPECT_TRUE(ValidateCorpus(c).empty());
}

TEST(ValidateCorpusTest, DuplicateIdNamed) {
  Corpus c;
  c.documents.push_back(MakeDoc("dup", {"a", "b"}, {{1, 2}}));
  c.documents.push_back(MakeDoc("dup", {"c", "d"}, {{2, 1}}));
  auto v = ValidateCorpus(c);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].doc_id, "dup");
  EXPECT_EQ(v[0].rule, "duplicate doc_id");
}

TEST(ValidateCorpusTest, SingleClause) {
  Corpus c;
  c.documents.push_back(MakeDoc("one", {"alone"}, {{1, 1}}));
  auto v = ValidateCorpus(c);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].rule, "fewer than 2 clauses");
}

TEST(ValidateCorpusTest, MissingGoldAndBadLabel) {
  Corpus c;
  Document d = MakeDoc("d", {"a", "b"}, {});
  d.emotion_label = "joy";
  c.documents.push_back(d);
  std::set<std::string> rules;
  for (const auto &v : ValidateCorpus(c)) rules.insert(v.rule);
  EXPECT_TRUE(rules.count("no gold pairs"));
  EXPECT_TRUE(rules.count("unknown emotion label"));
  EXPECT_TRUE(ValidateCorpus(c, {.require_gold = false}).size() == 1);
}

TEST(ValidateCorpusTest, OutOfRangeConstructedInMemory) {
  Corpus c;
  c.documents.push_back(MakeDoc("d", {"a", "b"}, {{3, 1}}));
  auto v = ValidateCorpus(c);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v[0].rule, "pair index out of range");
}

Corpus TenDocs() {
  Corpus c;
  for (int i = 0; i < 10; ++i) {
    c.documents.push_back(
        MakeDoc("d" + std::to_string(i), {"a", "b"}, {{1, 2}}));
  }
  return c;
}

TEST(SplitCorpusTest, SizesAndDisjoint) {
  auto [train, test] = SplitCorpus(TenDocs(), 0.2, 7);
  EXPECT_EQ(train.size(), 8u);
  EXPECT_EQ(test.size(), 2u);
  EXPECT_EQ(train.split_tag, SplitTag::kTrain);
  EXPECT_EQ(test.split_tag, SplitTag::kTest);
  std::set<std::string> ids;
  for (const auto &d : train.documents) ids.insert(d.doc_id);
  for (const auto &d : test.documents) EXPECT_TRUE(ids.insert(d.doc_id).second);
  EXPECT_EQ(ids.size(), 10u);
}

TEST(SplitCorpusTest, Deterministic) {
  auto a = SplitCorpus(TenDocs(), 0.2, 7);
  auto b = SplitCorpus(TenDocs(), 0.2, 7);
  EXPECT_EQ(EmitCorpus(a.first), EmitCorpus(b.first));
  EXPECT_EQ(EmitCorpus(a.second), EmitCorpus(b.second));
}

TEST(SplitCorpusTest, KeepsFileOrder) {
  auto [train, test] = SplitCorpus(TenDocs(), 0.5, 3);
  for (const Corpus *c : {&train, &test}) {
    for (size_t i = 1; i < c->size(); ++i) {
      EXPECT_LT(c->documents[i - 1].doc_id, c->documents[i].doc_id);
    }
  }
}

TEST(SplitCorpusTest, FractionOutOfRange) {
  EXPECT_THROW(SplitCorpus(TenDocs(), 1.0, 7), PreconditionError);
  EXPECT_THROW(SplitCorpus(TenDocs(), 0.0, 7), PreconditionError);
}

TEST(SplitCorpusTest, RequiresUnsplit) {
  auto [train, test] = SplitCorpus(TenDocs(), 0.2, 7);
  EXPECT_THROW(SplitCorpus(train, 0.5, 1), PreconditionError);
}

}  // namespace
}  // namespace ecforge
