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

#ifndef ECFORGE_INSTRUCTION_H_
#define ECFORGE_INSTRUCTION_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ecforge/corpus.h"
#include "ecforge/knowledge.h"

namespace ecforge {

// Wording of the instruction template. Changing any text must come with a
// new `version` so runs stay comparable.
struct TemplateConfig {
  std::string version;
  std::string task_description;
  std::string knowledge_preamble_distribution;
  std::string knowledge_preamble_polarity;
  std::string response_grammar_version;

  static TemplateConfig Defaults();

  // Throws ConfigError on empty fields or an unknown grammar version.
  void Validate() const;

  bool operator==(const TemplateConfig &) const = default;
};

// Only grammar the pair parser understands.
inline constexpr std::string_view kPairGrammarV1 = "pairs-v1";

// "key: value" lines; '#' starts a comment line. Keys: version,
// task_description, knowledge_preamble_distribution,
// knowledge_preamble_polarity, response_grammar_version. Missing keys
// fall back to the defaults.
TemplateConfig ParseTemplateConfig(std::string_view text);
std::string EmitTemplateConfig(const TemplateConfig &config);
TemplateConfig LoadTemplateConfig(const std::string &path);

enum class RecordSource { kEcpe, kCausal };

std::string_view RecordSourceName(RecordSource source);

struct InstructionRecord {
  std::string record_id;
  RecordSource source = RecordSource::kEcpe;
  std::string instruction;
  std::string response;
  std::map<std::string, std::string> meta;

  bool operator==(const InstructionRecord &) const = default;
};

// Instruction text. Elements, separated by blank lines:
//   1. task description
//   2. "Document [<doc_id>]:" followed by "<i>. <clause>" lines
//   3. the knowledge preamble matching the knowledge kind
//   4. the knowledge: "<label>: <score>" lines (4 decimals, sorted) or a
//      single POSITIVE / NEGATIVE line
// With knowledge == nullptr only elements 1 and 2 are emitted.
std::string RenderInstruction(const Document &doc,
                              const EmotionalKnowledge *knowledge,
                              const TemplateConfig &config);

inline std::string RenderInstruction(const AnnotatedDocument &annotated,
                                     const TemplateConfig &config) {
  return RenderInstruction(annotated.document, &annotated.knowledge, config);
}

// Canonical response: "(e1,c1); (e2,c2)" in (emotion, cause) order.
// Throws PreconditionError for an empty set.
std::string RenderResponse(const PairSet &gold);

struct ParsedPairs {
  PairSet pairs;
  bool no_match = true;   // no "(int,int)" group was found
  size_t groups = 0;      // groups found, duplicates included
  size_t duplicates = 0;  // groups - pairs.size()
};

// Extracts every "(int,int)" group from free text. Accepts ASCII and
// full-width parentheses and commas, any whitespace inside a group, and
// anything at all between groups. Never fails.
ParsedPairs ParsePairs(std::string_view text);

// ECPE training or evaluation record for a document. Knowledge may be
// null (no emotional knowledge). record_id is "ecpe:<doc_id>".
InstructionRecord MakeEcpeRecord(const Document &doc,
                                 const EmotionalKnowledge *knowledge,
                                 const TemplateConfig &config, SplitTag split);

// One JSON object per line: record_id, source, instruction, response, meta.
std::string EmitRecordLine(const InstructionRecord &record);
std::string EmitRecords(const std::vector<InstructionRecord> &records);
std::vector<InstructionRecord> ParseRecords(std::string_view raw);

}  // namespace ecforge

#endif  // ECFORGE_INSTRUCTION_H_
