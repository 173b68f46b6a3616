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

#include "ecforge/instruction.h"

#include <cstdio>
#include <sstream>

#include "ecforge/errors.h"
#include "ecforge/strings.h"
#include "json.hpp"

namespace ecforge {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string FormatScore(double score) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", score);
  std::string out = buf;
  if (out == "-0.0000") out = "0.0000";
  return out;
}

// Full-width forms that models emit in place of ASCII punctuation.
std::string FoldFullWidth(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (size_t i = 0; i < text.size(); ++i) {
    if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xEF &&
        static_cast<unsigned char>(text[i + 1]) == 0xBC) {
      unsigned char c = static_cast<unsigned char>(text[i + 2]);
      char folded = c == 0x88 ? '(' : c == 0x89 ? ')' : c == 0x8C ? ',' : 0;
      if (folded) {
        out += folded;
        i += 2;
        continue;
      }
    }
    out += text[i];
  }
  return out;
}

bool IsDigit(char c) { return c >= '0' && c <= '9'; }

// Reads an unsigned integer at pos; false on no digits or overflow.
bool ReadIndex(const std::string &s, size_t &pos, int &value) {
  size_t start = pos;
  long long v = 0;
  while (pos < s.size() && IsDigit(s[pos])) {
    v = v * 10 + (s[pos] - '0');
    if (v > 1000000000LL) return false;
    ++pos;
  }
  value = static_cast<int>(v);
  return pos > start;
}

void SkipSpace(const std::string &s, size_t &pos) {
  while (pos < s.size() && IsAsciiSpace(s[pos])) ++pos;
}

}  // namespace

TemplateConfig TemplateConfig::Defaults() {
  TemplateConfig config;
  config.version = "ecpe-instruct-v1";
  config.task_description =
      "Task: extract all emotion-cause pairs from the document below. Each "
      "clause is numbered. A pair (e,c) means clause e expresses an emotion "
      "and clause c states its cause; e and c may be the same clause. Answer "
      "only with the pairs, written as (e,c) and separated by \"; \".";
  config.knowledge_preamble_distribution =
      "Emotional knowledge: emotion labels ranked by similarity to the "
      "commonsense reaction of the person in the document (higher means more "
      "likely):";
  config.knowledge_preamble_polarity =
      "Emotional knowledge: overall emotional polarity of the document:";
  config.response_grammar_version = std::string(kPairGrammarV1);
  return config;
}

void TemplateConfig::Validate() const {
  auto require = [](const std::string &value, const char *name) {
    if (Trim(value).empty()) {
      throw ConfigError(std::string("template config: '") + name +
                        "' is empty");
    }
  };
  require(version, "version");
  require(task_description, "task_description");
  require(knowledge_preamble_distribution, "knowledge_preamble_distribution");
  require(knowledge_preamble_polarity, "knowledge_preamble_polarity");
  if (response_grammar_version != kPairGrammarV1) {
    throw ConfigError("template config: unknown response grammar '" +
                      response_grammar_version + "'");
  }
}

TemplateConfig ParseTemplateConfig(std::string_view text) {
  TemplateConfig config = TemplateConfig::Defaults();
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = Trim(line);
    if (view.empty() || view.front() == '#') continue;
    size_t colon = view.find(':');
    if (colon == std::string_view::npos) {
      throw ConfigError("template config line " + std::to_string(lineno) +
                        ": expected 'key: value'");
    }
    std::string key(Trim(view.substr(0, colon)));
    std::string value(Trim(view.substr(colon + 1)));
    if (key == "version") {
      config.version = value;
    } else if (key == "task_description") {
      config.task_description = value;
    } else if (key == "knowledge_preamble_distribution") {
      config.knowledge_preamble_distribution = value;
    } else if (key == "knowledge_preamble_polarity") {
      config.knowledge_preamble_polarity = value;
    } else if (key == "response_grammar_version") {
      config.response_grammar_version = value;
    } else {
      throw ConfigError("template config line " + std::to_string(lineno) +
                        ": unknown key '" + key + "'");
    }
  }
  config.Validate();
  return config;
}

std::string EmitTemplateConfig(const TemplateConfig &config) {
  std::string out;
  out += "version: " + config.version + "\n";
  out += "task_description: " + config.task_description + "\n";
  out += "knowledge_preamble_distribution: " +
         config.knowledge_preamble_distribution + "\n";
  out += "knowledge_preamble_polarity: " + config.knowledge_preamble_polarity +
         "\n";
  out += "response_grammar_version: " + config.response_grammar_version + "\n";
  return out;
}

TemplateConfig LoadTemplateConfig(const std::string &path) {
  return ParseTemplateConfig(ReadFile(path));
}

std::string_view RecordSourceName(RecordSource source) {
  return source == RecordSource::kEcpe ? "ecpe" : "causal";
}

std::string RenderInstruction(const Document &doc,
                              const EmotionalKnowledge *knowledge,
                              const TemplateConfig &config) {
  config.Validate();
  std::string out = config.task_description;
  out += "\n\nDocument [" + doc.doc_id + "]:";
  for (const Clause &clause : doc.clauses) {
    out += "\n" + std::to_string(clause.index) + ". " + clause.text;
  }
  if (knowledge == nullptr) return out;

  if (const auto *dist = knowledge->distribution()) {
    out += "\n\n" + config.knowledge_preamble_distribution;
    for (const LabelScore &entry : dist->entries()) {
      out += "\n" + std::string(LabelName(entry.label)) + ": " +
             FormatScore(entry.score);
    }
  } else {
    out += "\n\n" + config.knowledge_preamble_polarity;
    out += "\n" + std::string(PolarityName(knowledge->polarity()->label));
  }
  return out;
}

std::string RenderResponse(const PairSet &gold) {
  if (gold.empty()) throw PreconditionError("render_response: empty gold set");
  std::string out;
  for (const Pair &pair : gold) {
    if (!out.empty()) out += "; ";
    out += "(" + std::to_string(pair.emotion) + "," +
           std::to_string(pair.cause) + ")";
  }
  return out;
}

ParsedPairs ParsePairs(std::string_view text) {
  ParsedPairs result;
  const std::string s = FoldFullWidth(text);
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '(') continue;
    size_t pos = i + 1;
    int emotion = 0, cause = 0;
    SkipSpace(s, pos);
    if (!ReadIndex(s, pos, emotion)) continue;
    SkipSpace(s, pos);
    if (pos >= s.size() || s[pos] != ',') continue;
    ++pos;
    SkipSpace(s, pos);
    if (!ReadIndex(s, pos, cause)) continue;
    SkipSpace(s, pos);
    if (pos >= s.size() || s[pos] != ')') continue;
    ++result.groups;
    result.pairs.insert({emotion, cause});
    i = pos;
  }
  result.no_match = result.groups == 0;
  result.duplicates = result.groups - result.pairs.size();
  return result;
}

InstructionRecord MakeEcpeRecord(const Document &doc,
                                 const EmotionalKnowledge *knowledge,
                                 const TemplateConfig &config,
                                 SplitTag split) {
  InstructionRecord record;
  record.record_id = "ecpe:" + doc.doc_id;
  record.source = RecordSource::kEcpe;
  record.instruction = RenderInstruction(doc, knowledge, config);
  record.response = RenderResponse(doc.gold_pairs);
  record.meta["doc_id"] = doc.doc_id;
  record.meta["knowledge_kind"] =
      knowledge ? std::string(KnowledgeKindName(knowledge->kind())) : "none";
  record.meta["template_version"] = config.version;
  record.meta["split"] = std::string(SplitTagName(split));
  return record;
}

std::string EmitRecordLine(const InstructionRecord &record) {
  ordered_json out;
  out["record_id"] = record.record_id;
  out["source"] = RecordSourceName(record.source);
  out["instruction"] = record.instruction;
  out["response"] = record.response;
  ordered_json meta = ordered_json::object();
  for (const auto &[key, value] : record.meta) meta[key] = value;
  out["meta"] = std::move(meta);
  return out.dump();
}

std::string EmitRecords(const std::vector<InstructionRecord> &records) {
  std::string out;
  for (const auto &record : records) {
    out += EmitRecordLine(record);
    out += '\n';
  }
  return out;
}

std::vector<InstructionRecord> ParseRecords(std::string_view raw) {
  std::vector<InstructionRecord> records;
  std::istringstream in{std::string(raw)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (Trim(line).empty()) continue;
    try {
      json object = json::parse(line);
      InstructionRecord record;
      record.record_id = object.at("record_id").get<std::string>();
      std::string source = object.at("source").get<std::string>();
      if (source == "ecpe") {
        record.source = RecordSource::kEcpe;
      } else if (source == "causal") {
        record.source = RecordSource::kCausal;
      } else {
        throw DataError("unknown source '" + source + "'");
      }
      record.instruction = object.at("instruction").get<std::string>();
      record.response = object.at("response").get<std::string>();
      if (object.contains("meta")) {
        for (const auto &[key, value] : object["meta"].items()) {
          record.meta[key] = value.get<std::string>();
        }
      }
      if (record.instruction.empty() || record.response.empty()) {
        throw DataError("empty instruction or response");
      }
      if (record.source == RecordSource::kEcpe &&
          !record.meta.count("doc_id")) {
        throw DataError("ecpe record without meta.doc_id");
      }
      records.push_back(std::move(record));
    } catch (const std::exception &e) {
      throw DataError("record line " + std::to_string(lineno) + ": " +
                          e.what(),
                      {{lineno, e.what()}});
    }
  }
  return records;
}

}  // namespace ecforge
