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

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>
#include <unordered_set>

#include "ecforge/emotion_labels.h"
#include "ecforge/errors.h"
#include "ecforge/shuffle.h"
#include "json.hpp"

namespace ecforge {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::vector<std::string_view> SplitLines(std::string_view raw) {
  std::vector<std::string_view> lines;
  size_t start = 0;
  while (start < raw.size()) {
    size_t end = raw.find('\n', start);
    if (end == std::string_view::npos) end = raw.size();
    std::string_view line = raw.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

bool IsBlank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), IsSpace);
}

std::optional<int> ParseInt(std::string_view s) {
  while (!s.empty() && IsSpace(s.front())) s.remove_prefix(1);
  while (!s.empty() && IsSpace(s.back())) s.remove_suffix(1);
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::string Join(const std::vector<LineIssue> &issues) {
  std::ostringstream out;
  out << issues.size() << " problem(s) in corpus";
  for (const auto &issue : issues) {
    out << "\n  line " << issue.line << ": " << issue.reason;
  }
  return out.str();
}

// Adds the pair, or records why it cannot be added.
void AddPair(Document &doc, int emotion, int cause, int line,
             std::vector<LineIssue> &issues) {
  int n = static_cast<int>(doc.clauses.size());
  if (emotion < 1 || emotion > n || cause < 1 || cause > n) {
    issues.push_back({line, "pair index out of range: (" +
                                std::to_string(emotion) + "," +
                                std::to_string(cause) + ") with " +
                                std::to_string(n) + " clauses in doc '" +
                                doc.doc_id + "'"});
    return;
  }
  doc.gold_pairs.insert({emotion, cause});
}

std::optional<Document> ParseCanonicalLine(std::string_view line, int lineno,
                                           std::vector<LineIssue> &issues) {
  json record;
  try {
    record = json::parse(line);
  } catch (const json::exception &e) {
    issues.push_back({lineno, std::string("malformed record: ") + e.what()});
    return std::nullopt;
  }
  auto fail = [&](const std::string &reason) {
    issues.push_back({lineno, "malformed record: " + reason});
    return std::nullopt;
  };
  if (!record.is_object()) return fail("not a JSON object");
  auto id = record.find("doc_id");
  if (id == record.end() || !id->is_string() ||
      id->get<std::string>().empty()) {
    return fail("missing or empty string field 'doc_id'");
  }
  Document doc;
  doc.doc_id = id->get<std::string>();

  auto clauses = record.find("clauses");
  if (clauses == record.end() || !clauses->is_array()) {
    return fail("missing array field 'clauses'");
  }
  for (const auto &c : *clauses) {
    if (!c.is_string()) return fail("clause is not a string");
    std::string text = NormalizeClauseText(c.get<std::string>());
    if (text.empty()) return fail("empty clause text");
    doc.clauses.push_back(
        {static_cast<int>(doc.clauses.size()) + 1, std::move(text)});
  }

  auto pairs = record.find("pairs");
  if (pairs == record.end() || !pairs->is_array()) {
    return fail("missing array field 'pairs'");
  }
  size_t before = issues.size();
  for (const auto &p : *pairs) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() ||
        !p[1].is_number_integer()) {
      return fail("pair is not a two-integer array");
    }
    AddPair(doc, p[0].get<int>(), p[1].get<int>(), lineno, issues);
  }
  if (issues.size() != before) return std::nullopt;

  auto emotion = record.find("emotion");
  if (emotion != record.end() && !emotion->is_null()) {
    if (!emotion->is_string()) return fail("'emotion' is not a string");
    doc.emotion_label = emotion->get<std::string>();
  }
  return doc;
}

// Legacy tabular layout, one block per document:
//   <doc_id> <clause_count>
//   (e1, c1), (e2, c2)
//   <index>,<emotion category|null>,<emotion token|null>,<clause text>
//   ... clause_count clause lines ...
void ParseLegacy(const std::vector<std::string_view> &lines,
                 std::vector<std::pair<Document, int>> &located,
                 std::vector<LineIssue> &issues) {
  static const std::regex kPairRe(R"(\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\))");
  size_t i = 0;
  while (i < lines.size()) {
    if (IsBlank(lines[i])) {
      ++i;
      continue;
    }
    int header_line = static_cast<int>(i) + 1;
    std::istringstream header{std::string(lines[i])};
    std::string doc_id, count_token, extra;
    header >> doc_id >> count_token;
    auto count = ParseInt(count_token);
    if (doc_id.empty() || !count || *count < 0 || (header >> extra)) {
      issues.push_back({header_line,
                        "malformed record: expected '<doc_id> <clause_count>'"});
      // Resynchronize on the next blank line.
      while (i < lines.size() && !IsBlank(lines[i])) ++i;
      continue;
    }
    ++i;
    if (i >= lines.size()) {
      issues.push_back({header_line, "malformed record: missing pair line"});
      break;
    }
    int pair_line = static_cast<int>(i) + 1;
    std::string pair_text(lines[i]);
    ++i;

    Document doc;
    doc.doc_id = doc_id;
    bool ok = true;
    for (int k = 0; k < *count; ++k, ++i) {
      int lineno = static_cast<int>(i) + 1;
      if (i >= lines.size() || IsBlank(lines[i])) {
        issues.push_back({lineno, "malformed record: doc '" + doc_id +
                                      "' declares " + std::to_string(*count) +
                                      " clauses but has " + std::to_string(k)});
        ok = false;
        break;
      }
      std::string_view row = lines[i];
      size_t c1 = row.find(',');
      size_t c2 = c1 == std::string_view::npos ? c1 : row.find(',', c1 + 1);
      size_t c3 = c2 == std::string_view::npos ? c2 : row.find(',', c2 + 1);
      if (c3 == std::string_view::npos) {
        issues.push_back(
            {lineno, "malformed record: clause row needs 4 comma fields"});
        ok = false;
        continue;
      }
      auto index = ParseInt(row.substr(0, c1));
      if (!index || *index != k + 1) {
        issues.push_back({lineno, "malformed record: expected clause index " +
                                      std::to_string(k + 1)});
        ok = false;
        continue;
      }
      std::string category(row.substr(c1 + 1, c2 - c1 - 1));
      std::string text = NormalizeClauseText(row.substr(c3 + 1));
      if (text.empty()) {
        issues.push_back({lineno, "malformed record: empty clause text"});
        ok = false;
        continue;
      }
      std::transform(category.begin(), category.end(), category.begin(),
                     [](unsigned char c) { return std::tolower(c); });
      if (!doc.emotion_label && category != "null" &&
          LabelFromName(category)) {
        doc.emotion_label = category;
      }
      doc.clauses.push_back({k + 1, std::move(text)});
    }
    if (!ok) continue;

    size_t before = issues.size();
    auto begin = std::sregex_iterator(pair_text.begin(), pair_text.end(),
                                      kPairRe);
    size_t found = 0;
    for (auto it = begin; it != std::sregex_iterator(); ++it, ++found) {
      auto e = ParseInt((*it)[1].str());
      auto c = ParseInt((*it)[2].str());
      if (!e || !c) {
        issues.push_back({pair_line, "malformed record: bad pair index"});
        continue;
      }
      AddPair(doc, *e, *c, pair_line, issues);
    }
    if (found == 0 && !IsBlank(pair_text)) {
      issues.push_back({pair_line, "malformed record: unreadable pair line"});
    }
    if (issues.size() != before) continue;
    located.emplace_back(std::move(doc), header_line);
  }
}

}  // namespace

std::string Document::Text() const {
  std::string out;
  for (const auto &clause : clauses) {
    if (!out.empty()) out += ' ';
    out += clause.text;
  }
  return out;
}

std::string_view SplitTagName(SplitTag tag) {
  switch (tag) {
    case SplitTag::kTrain:
      return "train";
    case SplitTag::kTest:
      return "test";
    case SplitTag::kUnsplit:
      return "unsplit";
  }
  return "unsplit";
}

SplitTag ParseSplitTag(std::string_view name) {
  if (name == "train") return SplitTag::kTrain;
  if (name == "test") return SplitTag::kTest;
  if (name == "unsplit") return SplitTag::kUnsplit;
  throw ConfigError("unknown split tag '" + std::string(name) + "'");
}

CorpusFormat ParseCorpusFormat(std::string_view name) {
  if (name == "canonical-jsonl" || name == "jsonl") {
    return CorpusFormat::kCanonicalJsonl;
  }
  if (name == "legacy-tabular" || name == "legacy") {
    return CorpusFormat::kLegacyTabular;
  }
  throw ConfigError("unknown corpus format '" + std::string(name) + "'");
}

std::string NormalizeClauseText(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (IsSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

Corpus ParseCorpus(std::string_view raw, CorpusFormat format, SplitTag tag) {
  std::vector<LineIssue> issues;
  std::vector<std::pair<Document, int>> located;
  auto lines = SplitLines(raw);

  if (format == CorpusFormat::kCanonicalJsonl) {
    for (size_t i = 0; i < lines.size(); ++i) {
      if (IsBlank(lines[i])) continue;
      int lineno = static_cast<int>(i) + 1;
      if (auto doc = ParseCanonicalLine(lines[i], lineno, issues)) {
        located.emplace_back(std::move(*doc), lineno);
      }
    }
  } else {
    ParseLegacy(lines, located, issues);
  }

  std::map<std::string, int> first_seen;
  Corpus corpus;
  corpus.split_tag = tag;
  for (auto &[doc, lineno] : located) {
    auto [it, inserted] = first_seen.emplace(doc.doc_id, lineno);
    if (!inserted) {
      issues.push_back({lineno, "duplicate doc_id '" + doc.doc_id +
                                    "' (first seen on line " +
                                    std::to_string(it->second) + ")"});
      continue;
    }
    corpus.documents.push_back(std::move(doc));
  }
  if (!issues.empty()) {
    std::stable_sort(issues.begin(), issues.end(),
                     [](const LineIssue &a, const LineIssue &b) {
                       return a.line < b.line;
                     });
    throw DataError(Join(issues), std::move(issues));
  }
  return corpus;
}

std::string EmitDocumentLine(const Document &doc) {
  ordered_json record;
  record["doc_id"] = doc.doc_id;
  ordered_json clauses = ordered_json::array();
  for (const auto &clause : doc.clauses) clauses.push_back(clause.text);
  record["clauses"] = std::move(clauses);
  ordered_json pairs = ordered_json::array();
  for (const auto &pair : doc.gold_pairs) {
    pairs.push_back({pair.emotion, pair.cause});
  }
  record["pairs"] = std::move(pairs);
  if (doc.emotion_label) record["emotion"] = *doc.emotion_label;
  return record.dump();
}

std::string EmitCorpus(const Corpus &corpus) {
  std::string out;
  for (const auto &doc : corpus.documents) {
    out += EmitDocumentLine(doc);
    out += '\n';
  }
  return out;
}

std::vector<Violation> ValidateCorpus(const Corpus &corpus,
                                      const ValidateOptions &options) {
  std::vector<Violation> violations;
  std::unordered_set<std::string> seen;
  for (const auto &doc : corpus.documents) {
    auto add = [&](std::string rule, std::string detail = {}) {
      violations.push_back({doc.doc_id, std::move(rule), std::move(detail)});
    };
    if (doc.doc_id.empty()) add("empty doc_id");
    if (!seen.insert(doc.doc_id).second) {
      add("duplicate doc_id", "doc_id '" + doc.doc_id + "' repeats");
    }
    if (doc.clauses.size() < 2) {
      add("fewer than 2 clauses",
          std::to_string(doc.clauses.size()) + " clause(s)");
    }
    for (size_t i = 0; i < doc.clauses.size(); ++i) {
      const Clause &clause = doc.clauses[i];
      if (clause.index != static_cast<int>(i) + 1) {
        add("clause indices not contiguous",
            "position " + std::to_string(i + 1) + " has index " +
                std::to_string(clause.index));
      }
      if (clause.text.empty()) {
        add("empty clause text", "clause " + std::to_string(i + 1));
      } else if (clause.text.find_first_of("\r\n") != std::string::npos) {
        add("line break in clause text", "clause " + std::to_string(i + 1));
      }
    }
    int n = static_cast<int>(doc.clauses.size());
    for (const Pair &pair : doc.gold_pairs) {
      if (pair.emotion < 1 || pair.emotion > n || pair.cause < 1 ||
          pair.cause > n) {
        add("pair index out of range", "(" + std::to_string(pair.emotion) +
                                           "," + std::to_string(pair.cause) +
                                           ")");
      }
    }
    if (options.require_gold && doc.gold_pairs.empty()) {
      add("no gold pairs");
    }
    if (doc.emotion_label && !LabelFromName(*doc.emotion_label)) {
      add("unknown emotion label", "'" + *doc.emotion_label + "'");
    }
  }
  return violations;
}

std::pair<Corpus, Corpus> SplitCorpus(const Corpus &corpus,
                                      double test_fraction, uint64_t seed) {
  if (corpus.split_tag != SplitTag::kUnsplit) {
    throw PreconditionError("split_corpus requires an unsplit corpus");
  }
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw PreconditionError("test fraction must lie strictly in (0,1), got " +
                            std::to_string(test_fraction));
  }
  size_t n = corpus.size();
  size_t test_count =
      static_cast<size_t>(std::floor(test_fraction * static_cast<double>(n) +
                                     0.5));
  std::vector<size_t> perm = SeededPermutation(n, seed);
  std::vector<bool> is_test(n, false);
  for (size_t k = 0; k < test_count; ++k) is_test[perm[k]] = true;

  Corpus train, test;
  train.split_tag = SplitTag::kTrain;
  test.split_tag = SplitTag::kTest;
  for (size_t i = 0; i < n; ++i) {
    (is_test[i] ? test : train).documents.push_back(corpus.documents[i]);
  }
  return {std::move(train), std::move(test)};
}

std::string ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const std::string &path, std::string_view contents) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw ConfigError("short write to '" + path + "'");
}

Corpus LoadCorpus(const std::string &path, CorpusFormat format, SplitTag tag) {
  std::string raw = ReadFile(path);
  try {
    return ParseCorpus(raw, format, tag);
  } catch (const DataError &e) {
    throw DataError(path + ": " + e.what(), e.issues());
  }
}

}  // namespace ecforge
