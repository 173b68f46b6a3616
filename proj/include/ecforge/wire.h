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

#ifndef ECFORGE_WIRE_H_
#define ECFORGE_WIRE_H_

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ecforge/clients.h"

// JSON-over-HTTP protocol between the pipeline and model services:
//
//   POST /v1/generate {"text": s, "relation": "xReact"} -> {"reaction": s}
//   POST /v1/embed    {"texts": [s]}          -> {"vectors": [[x]], "dim": n}
//   POST /v1/polarity {"text": s}
//                     -> {"label": "POSITIVE"|"NEGATIVE", "confidence": x}
//   POST /v1/complete {"instruction": s, "decode": {"mode": "greedy"} |
//                      {"mode": "sampled", "seed": n}}  -> {"output": s}
//
// Bodies are UTF-8 JSON. Failures carry {"error": s} with a non-2xx status.
namespace ecforge::wire {

inline constexpr std::string_view kGenerateRoute = "/v1/generate";
inline constexpr std::string_view kEmbedRoute = "/v1/embed";
inline constexpr std::string_view kPolarityRoute = "/v1/polarity";
inline constexpr std::string_view kCompleteRoute = "/v1/complete";
inline constexpr std::string_view kRelation = "xReact";

std::string GenerateRequest(std::string_view text);
std::string EmbedRequest(const std::vector<std::string> &texts);
std::string PolarityRequest(std::string_view text);
std::string CompleteRequest(std::string_view instruction,
                            const DecodeOptions &decode);

// Response decoders. Throw DataError when the body does not match the
// protocol shape.
std::string DecodeGenerateResponse(std::string_view body);
std::vector<EmbeddingVector> DecodeEmbedResponse(std::string_view body);
PolarityVerdict DecodePolarityResponse(std::string_view body);
std::string DecodeCompleteResponse(std::string_view body);

// Extracts the "error" string of a failure body, or the raw body.
std::string DecodeErrorMessage(std::string_view body);

struct Response {
  int status = 200;
  std::string body;
};

// Serves one request against a backend: 400 for malformed bodies or
// violated preconditions, 404 for unknown routes, 502 when the backend
// itself fails.
Response Handle(ModelClient &backend, std::string_view route,
                std::string_view body);

// HTTP server exposing Handle() for a backend.
class Server {
 public:
  explicit Server(std::shared_ptr<ModelClient> backend);
  ~Server();

  Server(const Server &) = delete;
  Server &operator=(const Server &) = delete;

  // Binds (port 0 picks a free port) and serves on a background thread.
  // Returns the bound port.
  int Start(const std::string &host, int port = 0);

  // Binds and serves on the calling thread until Stop().
  void Run(const std::string &host, int port);

  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ecforge::wire

#endif  // ECFORGE_WIRE_H_
