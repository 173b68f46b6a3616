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

#include "ecforge/wire.h"

#include <thread>

#include "ecforge/errors.h"
#include "httplib.h"
#include "json.hpp"

namespace ecforge::wire {

namespace {

using json = nlohmann::json;

json ParseObject(std::string_view body) {
  json parsed;
  try {
    parsed = json::parse(body);
  } catch (const json::exception &e) {
    throw DataError(std::string("body is not valid JSON: ") + e.what());
  }
  if (!parsed.is_object()) throw DataError("body is not a JSON object");
  return parsed;
}

const json &Field(const json &object, const char *name) {
  auto it = object.find(name);
  if (it == object.end()) {
    throw DataError(std::string("missing field '") + name + "'");
  }
  return *it;
}

std::string StringField(const json &object, const char *name) {
  const json &value = Field(object, name);
  if (!value.is_string()) {
    throw DataError(std::string("field '") + name + "' is not a string");
  }
  return value.get<std::string>();
}

DecodeOptions DecodeDecode(const json &object) {
  auto it = object.find("decode");
  if (it == object.end()) return DecodeOptions::Greedy();
  if (!it->is_object()) throw DataError("field 'decode' is not an object");
  std::string mode = StringField(*it, "mode");
  if (mode == "greedy") return DecodeOptions::Greedy();
  if (mode == "sampled") {
    const json &seed = Field(*it, "seed");
    if (!seed.is_number_integer()) {
      throw DataError("sampled decode needs an integer 'seed'");
    }
    return DecodeOptions::Sampled(seed.get<uint64_t>());
  }
  throw DataError("unknown decode mode '" + mode + "'");
}

std::string ErrorBody(const std::string &message) {
  return json{{"error", message}}.dump();
}

}  // namespace

std::string GenerateRequest(std::string_view text) {
  return json{{"text", text}, {"relation", kRelation}}.dump();
}

std::string EmbedRequest(const std::vector<std::string> &texts) {
  return json{{"texts", texts}}.dump();
}

std::string PolarityRequest(std::string_view text) {
  return json{{"text", text}}.dump();
}

std::string CompleteRequest(std::string_view instruction,
                            const DecodeOptions &decode) {
  json decode_json = {{"mode", "greedy"}};
  if (decode.mode == DecodeOptions::Mode::kSampled) {
    decode_json = {{"mode", "sampled"}, {"seed", decode.seed}};
  }
  return json{{"instruction", instruction}, {"decode", decode_json}}.dump();
}

std::string DecodeGenerateResponse(std::string_view body) {
  return StringField(ParseObject(body), "reaction");
}

std::vector<EmbeddingVector> DecodeEmbedResponse(std::string_view body) {
  json object = ParseObject(body);
  const json &dim = Field(object, "dim");
  const json &vectors = Field(object, "vectors");
  if (!dim.is_number_integer() || dim.get<int64_t>() <= 0) {
    throw DataError("field 'dim' is not a positive integer");
  }
  if (!vectors.is_array()) throw DataError("field 'vectors' is not an array");
  auto expected = static_cast<size_t>(dim.get<int64_t>());
  std::vector<EmbeddingVector> out;
  out.reserve(vectors.size());
  for (const auto &row : vectors) {
    if (!row.is_array() || row.size() != expected) {
      throw DataError("embedding dimension mismatch: expected " +
                      std::to_string(expected));
    }
    EmbeddingVector v;
    v.values.reserve(expected);
    for (const auto &x : row) {
      if (!x.is_number()) throw DataError("embedding value is not a number");
      v.values.push_back(x.get<double>());
    }
    out.push_back(std::move(v));
  }
  return out;
}

PolarityVerdict DecodePolarityResponse(std::string_view body) {
  json object = ParseObject(body);
  auto label = PolarityFromName(StringField(object, "label"));
  if (!label) throw DataError("field 'label' must be POSITIVE or NEGATIVE");
  const json &confidence = Field(object, "confidence");
  if (!confidence.is_number()) {
    throw DataError("field 'confidence' is not a number");
  }
  return {*label, confidence.get<double>()};
}

std::string DecodeCompleteResponse(std::string_view body) {
  return StringField(ParseObject(body), "output");
}

std::string DecodeErrorMessage(std::string_view body) {
  try {
    json object = json::parse(body);
    if (object.is_object() && object.contains("error") &&
        object["error"].is_string()) {
      return object["error"].get<std::string>();
    }
  } catch (const json::exception &) {
  }
  return std::string(body);
}

Response Handle(ModelClient &backend, std::string_view route,
                std::string_view body) {
  if (route != kGenerateRoute && route != kEmbedRoute &&
      route != kPolarityRoute && route != kCompleteRoute) {
    return {404, ErrorBody("unknown route " + std::string(route))};
  }
  json request;
  try {
    request = ParseObject(body);
  } catch (const DataError &e) {
    return {400, ErrorBody(e.what())};
  }
  try {
    if (route == kGenerateRoute) {
      std::string text = StringField(request, "text");
      auto relation = request.find("relation");
      if (relation != request.end() &&
          (!relation->is_string() || relation->get<std::string>() != kRelation)) {
        throw DataError("unsupported relation; only xReact is served");
      }
      return {200, json{{"reaction", backend.GenerateReaction(text)}}.dump()};
    }
    if (route == kEmbedRoute) {
      const json &texts = Field(request, "texts");
      if (!texts.is_array()) throw DataError("field 'texts' is not an array");
      std::vector<std::string> batch;
      for (const auto &t : texts) {
        if (!t.is_string()) throw DataError("text is not a string");
        batch.push_back(t.get<std::string>());
      }
      auto vectors = backend.Embed(batch);
      json rows = json::array();
      for (const auto &v : vectors) rows.push_back(v.values);
      return {200, json{{"vectors", rows}, {"dim", vectors.front().dim()}}.dump()};
    }
    if (route == kPolarityRoute) {
      PolarityVerdict verdict =
          backend.ClassifyPolarity(StringField(request, "text"));
      return {200, json{{"label", PolarityName(verdict.label)},
                        {"confidence", verdict.confidence}}
                       .dump()};
    }
    std::string instruction = StringField(request, "instruction");
    DecodeOptions decode = DecodeDecode(request);
    return {200,
            json{{"output", backend.Complete(instruction, decode)}}.dump()};
  } catch (const DataError &e) {
    return {400, ErrorBody(e.what())};
  } catch (const PreconditionError &e) {
    return {400, ErrorBody(e.what())};
  } catch (const std::exception &e) {
    return {502, ErrorBody(e.what())};
  }
}

struct Server::Impl {
  std::shared_ptr<ModelClient> backend;
  httplib::Server http;
  std::thread thread;
};

Server::Server(std::shared_ptr<ModelClient> backend)
    : impl_(std::make_unique<Impl>()) {
  impl_->backend = std::move(backend);
  auto serve = [this](const httplib::Request &req, httplib::Response &res) {
    Response out = Handle(*impl_->backend, req.path, req.body);
    res.status = out.status;
    res.set_content(out.body, "application/json");
  };
  for (auto route : {kGenerateRoute, kEmbedRoute, kPolarityRoute,
                     kCompleteRoute}) {
    impl_->http.Post(std::string(route), serve);
  }
  impl_->http.set_error_handler(
      [](const httplib::Request &req, httplib::Response &res) {
        if (res.status == 404) {
          res.set_content(ErrorBody("unknown route " + req.path),
                          "application/json");
        }
      });
}

Server::~Server() { Stop(); }

int Server::Start(const std::string &host, int port) {
  int bound = port == 0 ? impl_->http.bind_to_any_port(host)
                        : (impl_->http.bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    throw ConfigError("cannot bind " + host + ":" + std::to_string(port));
  }
  impl_->thread = std::thread([this] { impl_->http.listen_after_bind(); });
  impl_->http.wait_until_ready();
  return bound;
}

void Server::Run(const std::string &host, int port) {
  if (!impl_->http.listen(host, port)) {
    throw ConfigError("cannot listen on " + host + ":" + std::to_string(port));
  }
}

void Server::Stop() {
  if (impl_->http.is_running()) impl_->http.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace ecforge::wire
