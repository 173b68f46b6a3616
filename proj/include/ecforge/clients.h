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

#ifndef ECFORGE_CLIENTS_H_
#define ECFORGE_CLIENTS_H_

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ecforge {

struct InferenceEndpoint {
  std::string base_url;  // e.g. "http://127.0.0.1:8080" or ".../prefix"
  int timeout_ms = 30000;
  int max_retries = 2;
  std::optional<std::string> auth_token;

  // Throws ConfigError unless timeout_ms > 0 and max_retries >= 0.
  void Validate() const;
};

struct EmbeddingVector {
  std::vector<double> values;

  size_t dim() const { return values.size(); }
};

enum class Polarity { kPositive, kNegative };

std::string_view PolarityName(Polarity polarity);
std::optional<Polarity> PolarityFromName(std::string_view name);

struct PolarityVerdict {
  Polarity label = Polarity::kPositive;
  double confidence = 0.0;  // [0, 1]

  bool operator==(const PolarityVerdict &) const = default;
};

// Greedy by default; sampling always carries an explicit seed.
struct DecodeOptions {
  enum class Mode { kGreedy, kSampled };
  Mode mode = Mode::kGreedy;
  uint64_t seed = 0;

  static DecodeOptions Greedy() { return {}; }
  static DecodeOptions Sampled(uint64_t seed) {
    return {Mode::kSampled, seed};
  }
};

// A connection to the model services. Public calls check preconditions
// and shape contracts, then forward to the backend hooks. Implementations
// must be safe to call from many threads at once.
class ModelClient {
 public:
  virtual ~ModelClient() = default;

  // xReact reaction for a document, returned verbatim apart from a
  // whitespace trim. May be "none".
  std::string GenerateReaction(std::string_view document_text);

  // One vector per input text, same order, one shared dimension.
  std::vector<EmbeddingVector> Embed(const std::vector<std::string> &texts);

  PolarityVerdict ClassifyPolarity(std::string_view document_text);

  std::string Complete(std::string_view instruction,
                       const DecodeOptions &decode = DecodeOptions::Greedy());

  // Identifies the backing service (and its settings) for cache keys and
  // run manifests.
  virtual std::string Fingerprint() const = 0;

 protected:
  virtual std::string DoGenerateReaction(std::string_view text) = 0;
  virtual std::vector<EmbeddingVector> DoEmbed(
      const std::vector<std::string> &texts) = 0;
  virtual PolarityVerdict DoClassifyPolarity(std::string_view text) = 0;
  virtual std::string DoComplete(std::string_view instruction,
                                 const DecodeOptions &decode) = 0;

 private:
  // First dimension seen in this session; 0 until the first batch.
  std::atomic<size_t> session_dim_{0};
};

// One client per service role. Roles may share a client.
struct ClientSet {
  std::shared_ptr<ModelClient> generator;
  std::shared_ptr<ModelClient> embedder;
  std::shared_ptr<ModelClient> polarity;
  std::shared_ptr<ModelClient> completer;

  static ClientSet Uniform(std::shared_ptr<ModelClient> client) {
    return {client, client, client, client};
  }
};

struct MockOptions {
  size_t dim = 64;
  double none_fraction = 0.43;
};

struct CallCounts {
  uint64_t generate = 0;
  uint64_t embed = 0;
  uint64_t polarity = 0;
  uint64_t complete = 0;

  uint64_t total() const { return generate + embed + polarity + complete; }
};

// Deterministic offline stand-in for every service role. All outputs are
// pure functions of the input text, keyed by ContentKey (FNV-1a 64 then
// SplitMix64):
//
//  * generate: key = ContentKey(trimmed text). If key % 10000 is below
//    round(none_fraction * 10000) the reaction is "none"; otherwise it is
//    MockReactions()[(key >> 32) % size].
//  * embed: text is lowercased (ASCII) and split into tokens (maximal runs
//    of letters, digits and non-ASCII bytes). Each token contributes
//    feature "w:<token>" with weight 1 and each character trigram of
//    "^<token>$" contributes "g:<trigram>" with weight 0.5. Feature f adds
//    +/-weight at index ContentKey(f) % dim, negative when the top bit of
//    ContentKey(f) is set. A text with no tokens uses the single feature
//    "t:<text>". The vector is L2-normalized; if it cancels to zero, it
//    becomes the unit vector at ContentKey(text) % dim.
//  * polarity: tokens are counted against MockPositiveWords() and
//    MockNegativeWords(). The majority wins; a tie goes POSITIVE when
//    ContentKey(trimmed text) is even, else NEGATIVE. Confidence is
//    (winner + 1) / (positive + negative + 2).
//  * complete: if the instruction contains "Document [<doc_id>]" and
//    doc_id is registered, returns that document's gold response;
//    otherwise returns kMockRefusal. Decode mode does not change output.
class MockModelClient : public ModelClient {
 public:
  static constexpr std::string_view kMockRefusal =
      "I cannot identify any emotion-cause pairs.";

  explicit MockModelClient(MockOptions options = {});

  const MockOptions &options() const { return options_; }

  // doc_id -> gold response text served by Complete().
  void SetGoldResponses(std::map<std::string, std::string> responses);

  bool InNoneBucket(std::string_view document_text) const;

  CallCounts calls() const;
  void ResetCalls();

  std::string Fingerprint() const override;

 protected:
  std::string DoGenerateReaction(std::string_view text) override;
  std::vector<EmbeddingVector> DoEmbed(
      const std::vector<std::string> &texts) override;
  PolarityVerdict DoClassifyPolarity(std::string_view text) override;
  std::string DoComplete(std::string_view instruction,
                         const DecodeOptions &decode) override;

 private:
  EmbeddingVector EmbedOne(std::string_view text) const;

  MockOptions options_;
  std::map<std::string, std::string> gold_;
  std::atomic<uint64_t> generate_calls_{0};
  std::atomic<uint64_t> embed_calls_{0};
  std::atomic<uint64_t> polarity_calls_{0};
  std::atomic<uint64_t> complete_calls_{0};
};

const std::vector<std::string> &MockReactions();
const std::vector<std::string> &MockPositiveWords();
const std::vector<std::string> &MockNegativeWords();

// Lowercased tokens as used by the mock embedder and polarity rule.
std::vector<std::string> MockTokens(std::string_view text);

// Speaks the JSON wire protocol over HTTP. Every failed attempt (no
// connection, timeout, non-2xx status, malformed body) is retried; after
// max_retries + 1 attempts a TransportError names the endpoint and the
// attempt count.
class HttpModelClient : public ModelClient {
 public:
  explicit HttpModelClient(InferenceEndpoint endpoint);

  const InferenceEndpoint &endpoint() const { return endpoint_; }
  std::string Fingerprint() const override;

 protected:
  std::string DoGenerateReaction(std::string_view text) override;
  std::vector<EmbeddingVector> DoEmbed(
      const std::vector<std::string> &texts) override;
  PolarityVerdict DoClassifyPolarity(std::string_view text) override;
  std::string DoComplete(std::string_view instruction,
                         const DecodeOptions &decode) override;

 private:
  template <typename Result, typename Decode>
  Result Post(std::string_view route, const std::string &body,
              Decode decode) const;

  InferenceEndpoint endpoint_;
  std::string scheme_host_port_;
  std::string path_prefix_;
};

}  // namespace ecforge

#endif  // ECFORGE_CLIENTS_H_
