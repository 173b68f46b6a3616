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

#include "ecforge/clients.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <regex>

#include "ecforge/errors.h"
#include "ecforge/hashing.h"
#include "ecforge/strings.h"

namespace ecforge {

void InferenceEndpoint::Validate() const {
  if (base_url.empty()) throw ConfigError("endpoint base_url is empty");
  if (timeout_ms <= 0) throw ConfigError("endpoint timeout must be > 0 ms");
  if (max_retries < 0) throw ConfigError("endpoint max_retries must be >= 0");
}

std::string_view PolarityName(Polarity polarity) {
  return polarity == Polarity::kPositive ? "POSITIVE" : "NEGATIVE";
}

std::optional<Polarity> PolarityFromName(std::string_view name) {
  if (name == "POSITIVE") return Polarity::kPositive;
  if (name == "NEGATIVE") return Polarity::kNegative;
  return std::nullopt;
}

std::string ModelClient::GenerateReaction(std::string_view document_text) {
  if (Trim(document_text).empty()) {
    throw PreconditionError("generate_reaction: document text is empty");
  }
  return std::string(Trim(DoGenerateReaction(document_text)));
}

std::vector<EmbeddingVector> ModelClient::Embed(
    const std::vector<std::string> &texts) {
  if (texts.empty()) throw PreconditionError("embed: empty batch");
  for (size_t i = 0; i < texts.size(); ++i) {
    if (texts[i].empty()) {
      throw PreconditionError("embed: text " + std::to_string(i) +
                              " is empty");
    }
  }
  std::vector<EmbeddingVector> vectors = DoEmbed(texts);
  if (vectors.size() != texts.size()) {
    throw Error(ErrorKind::kTransport,
                "embed: expected " + std::to_string(texts.size()) +
                    " vectors, got " + std::to_string(vectors.size()));
  }
  size_t dim = vectors.front().dim();
  for (const auto &v : vectors) {
    if (v.dim() != dim || dim == 0) {
      throw Error(ErrorKind::kTransport,
                  "embed: dimension mismatch within a batch");
    }
  }
  size_t expected = 0;
  if (!session_dim_.compare_exchange_strong(expected, dim) &&
      expected != dim) {
    throw Error(ErrorKind::kTransport,
                "embed: dimension " + std::to_string(dim) +
                    " differs from session dimension " +
                    std::to_string(expected));
  }
  return vectors;
}

PolarityVerdict ModelClient::ClassifyPolarity(std::string_view document_text) {
  if (Trim(document_text).empty()) {
    throw PreconditionError("classify_polarity: document text is empty");
  }
  PolarityVerdict verdict = DoClassifyPolarity(document_text);
  if (!(verdict.confidence >= 0.0 && verdict.confidence <= 1.0)) {
    throw Error(ErrorKind::kTransport,
                "classify_polarity: confidence outside [0,1]");
  }
  return verdict;
}

std::string ModelClient::Complete(std::string_view instruction,
                                  const DecodeOptions &decode) {
  if (instruction.empty()) {
    throw PreconditionError("complete: instruction is empty");
  }
  return DoComplete(instruction, decode);
}

// Mock -----------------------------------------------------------------

const std::vector<std::string> &MockReactions() {
  static const std::vector<std::string> kReactions = {
      "happy",     "sad",       "angry",     "afraid",    "surprised",
      "disgusted", "relieved",  "grateful",  "worried",   "excited",
      "upset",     "proud",     "lonely",    "nervous",   "satisfied",
      "embarrassed"};
  return kReactions;
}

const std::vector<std::string> &MockPositiveWords() {
  static const std::vector<std::string> kWords = {
      "happy",    "happiness", "glad",     "joy",      "joyful",
      "love",     "loved",     "lovely",   "smile",    "smiled",
      "smiling",  "laugh",     "laughed",  "delighted", "pleased",
      "excited",  "proud",     "grateful", "thankful", "wonderful",
      "great",    "good",      "best",     "relieved", "hope",
      "hopeful",  "win",       "won",      "celebrate", "celebrated",
      "success",  "successful", "kind",    "enjoy",    "enjoyed",
      "beautiful", "cheerful", "comfort",  "calm",     "safe"};
  return kWords;
}

const std::vector<std::string> &MockNegativeWords() {
  static const std::vector<std::string> kWords = {
      "sad",      "sadness",  "cry",      "cried",    "crying",
      "tears",    "angry",    "anger",    "furious",  "mad",
      "afraid",   "fear",     "scared",   "terrified", "hate",
      "hated",    "upset",    "hurt",     "pain",     "lonely",
      "worried",  "worry",    "anxious",  "miserable", "depressed",
      "disgust",  "disgusted", "sick",    "lost",     "lose",
      "die",      "died",     "death",    "dead",     "fail",
      "failed",   "bad",      "terrible", "awful",    "sorry",
      "shock",    "shocked",  "grief",    "cruel",    "annoyed",
      "nervous"};
  return kWords;
}

std::vector<std::string> MockTokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    bool word = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                (c >= '0' && c <= '9') || c >= 0x80;
    if (word) {
      current += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a')
                                        : static_cast<char>(c);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

MockModelClient::MockModelClient(MockOptions options) : options_(options) {
  if (options_.dim == 0) throw ConfigError("mock embedding dim must be > 0");
  if (!(options_.none_fraction >= 0.0 && options_.none_fraction <= 1.0)) {
    throw ConfigError("mock none_fraction must lie in [0,1]");
  }
}

void MockModelClient::SetGoldResponses(
    std::map<std::string, std::string> responses) {
  gold_ = std::move(responses);
}

bool MockModelClient::InNoneBucket(std::string_view document_text) const {
  uint64_t key = ContentKey(Trim(document_text));
  auto threshold =
      static_cast<uint64_t>(std::llround(options_.none_fraction * 10000.0));
  return key % 10000 < threshold;
}

CallCounts MockModelClient::calls() const {
  return {generate_calls_.load(), embed_calls_.load(), polarity_calls_.load(),
          complete_calls_.load()};
}

void MockModelClient::ResetCalls() {
  generate_calls_ = 0;
  embed_calls_ = 0;
  polarity_calls_ = 0;
  complete_calls_ = 0;
}

std::string MockModelClient::Fingerprint() const {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "mock:v1:dim=%zu:none=%.4f", options_.dim,
                options_.none_fraction);
  return buf;
}

std::string MockModelClient::DoGenerateReaction(std::string_view text) {
  ++generate_calls_;
  if (InNoneBucket(text)) return "none";
  uint64_t key = ContentKey(Trim(text));
  const auto &reactions = MockReactions();
  return reactions[(key >> 32) % reactions.size()];
}

EmbeddingVector MockModelClient::EmbedOne(std::string_view text) const {
  const size_t dim = options_.dim;
  EmbeddingVector v;
  v.values.assign(dim, 0.0);
  auto add = [&](const std::string &feature, double weight) {
    uint64_t key = ContentKey(feature);
    double sign = (key >> 63) ? -1.0 : 1.0;
    v.values[key % dim] += sign * weight;
  };
  std::vector<std::string> tokens = MockTokens(text);
  if (tokens.empty()) add("t:" + std::string(text), 1.0);
  for (const auto &token : tokens) {
    add("w:" + token, 1.0);
    std::string padded = "^" + token + "$";
    for (size_t i = 0; i + 3 <= padded.size(); ++i) {
      add("g:" + padded.substr(i, 3), 0.5);
    }
  }
  double norm = 0.0;
  for (double x : v.values) norm += x * x;
  norm = std::sqrt(norm);
  if (norm == 0.0) {
    v.values[ContentKey(text) % dim] = 1.0;
  } else {
    for (double &x : v.values) x /= norm;
  }
  return v;
}

std::vector<EmbeddingVector> MockModelClient::DoEmbed(
    const std::vector<std::string> &texts) {
  ++embed_calls_;
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto &text : texts) out.push_back(EmbedOne(text));
  return out;
}

PolarityVerdict MockModelClient::DoClassifyPolarity(std::string_view text) {
  ++polarity_calls_;
  const auto &pos_words = MockPositiveWords();
  const auto &neg_words = MockNegativeWords();
  int pos = 0, neg = 0;
  for (const auto &token : MockTokens(text)) {
    if (std::find(pos_words.begin(), pos_words.end(), token) !=
        pos_words.end()) {
      ++pos;
    } else if (std::find(neg_words.begin(), neg_words.end(), token) !=
               neg_words.end()) {
      ++neg;
    }
  }
  PolarityVerdict verdict;
  if (pos != neg) {
    verdict.label = pos > neg ? Polarity::kPositive : Polarity::kNegative;
  } else {
    verdict.label = ContentKey(Trim(text)) % 2 == 0 ? Polarity::kPositive
                                                    : Polarity::kNegative;
  }
  verdict.confidence = static_cast<double>(std::max(pos, neg) + 1) /
                       static_cast<double>(pos + neg + 2);
  return verdict;
}

std::string MockModelClient::DoComplete(std::string_view instruction,
                                        const DecodeOptions &) {
  ++complete_calls_;
  static const std::regex kMarker(R"(Document \[([^\]\r\n]+)\])");
  std::match_results<std::string_view::const_iterator> match;
  if (std::regex_search(instruction.begin(), instruction.end(), match,
                        kMarker)) {
    auto it = gold_.find(match[1].str());
    if (it != gold_.end()) return it->second;
  }
  return std::string(kMockRefusal);
}

}  // namespace ecforge
