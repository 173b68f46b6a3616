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

#include <chrono>

#include "ecforge/clients.h"
#include "ecforge/errors.h"
#include "ecforge/wire.h"
#include "httplib.h"

namespace ecforge {

HttpModelClient::HttpModelClient(InferenceEndpoint endpoint)
    : endpoint_(std::move(endpoint)) {
  endpoint_.Validate();
  const std::string &url = endpoint_.base_url;
  const std::string scheme = "http://";
  if (url.rfind(scheme, 0) != 0) {
    throw ConfigError("endpoint URL must start with http://: '" + url + "'");
  }
  size_t slash = url.find('/', scheme.size());
  if (slash == std::string::npos) {
    scheme_host_port_ = url;
  } else {
    scheme_host_port_ = url.substr(0, slash);
    path_prefix_ = url.substr(slash);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') {
      path_prefix_.pop_back();
    }
  }
  if (scheme_host_port_.size() == scheme.size()) {
    throw ConfigError("endpoint URL has no host: '" + url + "'");
  }
}

std::string HttpModelClient::Fingerprint() const {
  return "http:" + endpoint_.base_url;
}

template <typename Result, typename Decode>
Result HttpModelClient::Post(std::string_view route, const std::string &body,
                             Decode decode) const {
  const std::string path = path_prefix_ + std::string(route);
  const std::string where = endpoint_.base_url + std::string(route);
  const int attempts = endpoint_.max_retries + 1;
  std::string last_reason = "no attempt made";
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    httplib::Client http(scheme_host_port_);
    auto timeout = std::chrono::milliseconds(endpoint_.timeout_ms);
    http.set_connection_timeout(timeout);
    http.set_read_timeout(timeout);
    http.set_write_timeout(timeout);
    if (endpoint_.auth_token) http.set_bearer_token_auth(*endpoint_.auth_token);
    auto res = http.Post(path, body, "application/json");
    if (!res) {
      last_reason = "transport: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      last_reason = "HTTP " + std::to_string(res->status) + ": " +
                    wire::DecodeErrorMessage(res->body);
      continue;
    }
    try {
      return decode(res->body);
    } catch (const DataError &e) {
      last_reason = std::string("malformed response: ") + e.what();
    }
  }
  throw TransportError(where, attempts, last_reason);
}

std::string HttpModelClient::DoGenerateReaction(std::string_view text) {
  return Post<std::string>(wire::kGenerateRoute, wire::GenerateRequest(text),
                           wire::DecodeGenerateResponse);
}

std::vector<EmbeddingVector> HttpModelClient::DoEmbed(
    const std::vector<std::string> &texts) {
  return Post<std::vector<EmbeddingVector>>(
      wire::kEmbedRoute, wire::EmbedRequest(texts),
      [&](std::string_view body) {
        auto vectors = wire::DecodeEmbedResponse(body);
        if (vectors.size() != texts.size()) {
          throw DataError("expected " + std::to_string(texts.size()) +
                          " vectors, got " + std::to_string(vectors.size()));
        }
        return vectors;
      });
}

PolarityVerdict HttpModelClient::DoClassifyPolarity(std::string_view text) {
  return Post<PolarityVerdict>(wire::kPolarityRoute,
                               wire::PolarityRequest(text),
                               wire::DecodePolarityResponse);
}

std::string HttpModelClient::DoComplete(std::string_view instruction,
                                        const DecodeOptions &decode) {
  return Post<std::string>(wire::kCompleteRoute,
                           wire::CompleteRequest(instruction, decode),
                           wire::DecodeCompleteResponse);
}

}  // namespace ecforge
