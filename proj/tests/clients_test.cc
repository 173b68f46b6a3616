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

#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include "ecforge/errors.h"
#include "ecforge/wire.h"
#include "httplib.h"
#include "oracles.h"
#include "test_util.h"

namespace ecforge {
namespace {

TEST(MockGenerateTest, MatchesHashRule) {
  MockModelClient mock;
  for (std::string text :
       {"she could see everything after surgery", "I lost my keys",
        "The bus never came", "a", "Our dog died on Sunday"}) {
    EXPECT_EQ(mock.GenerateReaction(text), oracle::Reaction(text)) << text;
  }
  std::string text = "she could see everything after surgery";
  std::string reaction = mock.GenerateReaction(text);
  EXPECT_FALSE(reaction.empty());
  EXPECT_EQ(mock.GenerateReaction(text), reaction);
}

TEST(MockGenerateTest, NoneBucketYieldsNone) {
  MockModelClient mock;
  int found = 0;
  for (int i = 0; i < 200 && found < 5; ++i) {
    std::string text = "synthetic document " + std::to_string(i);
    if (!oracle::NoneBucket(text)) continue;
    ++found;
    EXPECT_TRUE(mock.InNoneBucket(text));
    EXPECT_EQ(mock.GenerateReaction(text), "none");
  }
  EXPECT_EQ(found, 5);
}

TEST(MockGenerateTest, BucketFractionIsConfigurable) {
  MockModelClient never({.dim = 64, .none_fraction = 0.0});
  MockModelClient always({.dim = 64, .none_fraction = 1.0});
  for (int i = 0; i < 50; ++i) {
    std::string text = "doc " + std::to_string(i);
    EXPECT_NE(never.GenerateReaction(text), "none");
    EXPECT_EQ(always.GenerateReaction(text), "none");
  }
  EXPECT_THROW(MockModelClient({.dim = 64, .none_fraction = 1.5}), ConfigError);
  EXPECT_THROW(MockModelClient({.dim = 0}), ConfigError);
}

TEST(MockGenerateTest, EmptyTextRejected) {
  MockModelClient mock;
  EXPECT_THROW(mock.GenerateReaction(""), PreconditionError);
  EXPECT_THROW(mock.GenerateReaction("  \n"), PreconditionError);
}

TEST(MockEmbedTest, IdenticalTextsIdenticalVectors) {
  MockModelClient mock;
  auto v = mock.Embed({"a", "a"});
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].values, v[1].values);
}

TEST(MockEmbedTest, ShapeAndOracle) {
  MockModelClient mock;
  std::vector<std::string> texts = {"a", "b", "the river flooded",
                                    "Mara was terrified", "!!"};
  auto v = mock.Embed(texts);
  ASSERT_EQ(v.size(), texts.size());
  for (size_t i = 0; i < texts.size(); ++i) {
    EXPECT_EQ(v[i].dim(), 64u);
    auto expect = oracle::Embed(texts[i]);
    for (size_t k = 0; k < 64; ++k) {
      EXPECT_NEAR(v[i].values[k], expect[k], 1e-15) << texts[i];
    }
  }
}

TEST(MockEmbedTest, OrderPreserved) {
  MockModelClient mock;
  auto ab = mock.Embed({"alpha", "beta"});
  auto ba = mock.Embed({"beta", "alpha"});
  EXPECT_EQ(ab[0].values, ba[1].values);
  EXPECT_EQ(ab[1].values, ba[0].values);
}

TEST(MockEmbedTest, Preconditions) {
  MockModelClient mock;
  EXPECT_THROW(mock.Embed({}), PreconditionError);
  EXPECT_THROW(mock.Embed({"a", ""}), PreconditionError);
}

TEST(MockPolarityTest, LexiconVote) {
  MockModelClient mock;
  PolarityVerdict happy = mock.ClassifyPolarity("I was so happy today");
  EXPECT_EQ(happy.label, Polarity::kPositive);
  EXPECT_DOUBLE_EQ(happy.confidence, 2.0 / 3.0);
  PolarityVerdict cried = mock.ClassifyPolarity("I cried all night");
  EXPECT_EQ(cried.label, Polarity::kNegative);
  EXPECT_GE(cried.confidence, 0.0);
  EXPECT_LE(cried.confidence, 1.0);
  EXPECT_THROW(mock.ClassifyPolarity(""), PreconditionError);
}

TEST(MockPolarityTest, TieBrokenByKeyParity) {
  MockModelClient mock;
  for (std::string text : {"the table is wooden", "happy but sad",
                           "nothing at all here"}) {
    PolarityVerdict v = mock.ClassifyPolarity(text);
    Polarity expect = oracle::Key(text) % 2 == 0 ? Polarity::kPositive
                                                 : Polarity::kNegative;
    EXPECT_EQ(v.label, expect) << text;
    EXPECT_DOUBLE_EQ(v.confidence, 0.5);
  }
}

TEST(MockCompleteTest, EchoesGoldOrRefuses) {
  MockModelClient mock;
  mock.SetGoldResponses({{"d3", "(3,2)"}});
  EXPECT_EQ(mock.Complete("Task...\n\nDocument [d3]:\n1. x"), "(3,2)");
  EXPECT_EQ(mock.Complete("Document [d9]:\n1. x"),
            MockModelClient::kMockRefusal);
  EXPECT_EQ(mock.Complete("what is this"), MockModelClient::kMockRefusal);
  EXPECT_EQ(mock.Complete("Document [d3]:", DecodeOptions::Greedy()),
            mock.Complete("Document [d3]:", DecodeOptions::Greedy()));
  EXPECT_THROW(mock.Complete(""), PreconditionError);
}

TEST(MockCallCountTest, CountsPerMethod) {
  MockModelClient mock;
  mock.GenerateReaction("x");
  mock.Embed({"a", "b"});
  mock.ClassifyPolarity("y");
  mock.Complete("z");
  mock.Complete("z");
  CallCounts c = mock.calls();
  EXPECT_EQ(c.generate, 1u);
  EXPECT_EQ(c.embed, 1u);
  EXPECT_EQ(c.polarity, 1u);
  EXPECT_EQ(c.complete, 2u);
  mock.ResetCalls();
  EXPECT_EQ(mock.calls().total(), 0u);
}

TEST(EndpointTest, Validate) {
  EXPECT_THROW((InferenceEndpoint{"http://x", 0, 1, {}}.Validate()),
               ConfigError);
  EXPECT_THROW((InferenceEndpoint{"http://x", 10, -1, {}}.Validate()),
               ConfigError);
  EXPECT_NO_THROW((InferenceEndpoint{"http://x", 10, 0, {}}.Validate()));
  EXPECT_THROW(HttpModelClient(InferenceEndpoint{"ftp://x", 10, 0, {}}),
               ConfigError);
}

TEST(HttpClientTest, UnreachableEndpointExhaustsRetries) {
  int port = testutil::UnusedPort();
  HttpModelClient client(InferenceEndpoint{
      "http://127.0.0.1:" + std::to_string(port), 500, 2, {}});
  try {
    client.GenerateReaction("hello");
    FAIL() << "expected TransportError";
  } catch (const TransportError &e) {
    EXPECT_EQ(e.attempts(), 3);
    EXPECT_NE(e.endpoint().find("/v1/generate"), std::string::npos);
    EXPECT_EQ(e.kind(), ErrorKind::kTransport);
  }
}

class CountingServer {
 public:
  explicit CountingServer(int status, std::string body) {
    server_.Post(R"(/.*)", [this, status, body](const httplib::Request &req,
                                                 httplib::Response &res) {
      ++hits_;
      last_auth_ = req.get_header_value("Authorization");
      res.status = status;
      res.set_content(body, "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~CountingServer() {
    server_.stop();
    thread_.join();
  }
  std::string url() const {
    return "http://127.0.0.1:" + std::to_string(port_);
  }
  int hits() const { return hits_; }
  std::string last_auth() const { return last_auth_; }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> hits_{0};
  std::string last_auth_;
};

TEST(HttpClientTest, ServerErrorRetriedExactly) {
  for (int retries : {0, 1, 3}) {
    CountingServer server(500, R"({"error":"boom"})");
    HttpModelClient client(InferenceEndpoint{server.url(), 2000, retries, {}});
    try {
      client.ClassifyPolarity("text");
      FAIL();
    } catch (const TransportError &e) {
      EXPECT_EQ(e.attempts(), retries + 1);
      EXPECT_NE(std::string(e.what()).find("boom"), std::string::npos);
    }
    EXPECT_EQ(server.hits(), retries + 1);
  }
}

TEST(HttpClientTest, MalformedBodyRetried) {
  CountingServer server(200, R"({"unexpected":1})");
  HttpModelClient client(InferenceEndpoint{server.url(), 2000, 1, {}});
  EXPECT_THROW(client.GenerateReaction("text"), TransportError);
  EXPECT_EQ(server.hits(), 2);
}

TEST(HttpClientTest, BearerToken) {
  CountingServer server(200, R"({"reaction":"happy"})");
  HttpModelClient client(InferenceEndpoint{server.url(), 2000, 0, "s3cret"});
  EXPECT_EQ(client.GenerateReaction("text"), "happy");
  EXPECT_EQ(server.last_auth(), "Bearer s3cret");
}

TEST(HttpClientTest, EmbedDimensionFixedPerSession) {
  httplib::Server server;
  std::atomic<int> hits{0};
  server.Post("/v1/embed", [&](const httplib::Request &, httplib::Response &res) {
    res.set_content(++hits == 1 ? R"({"vectors":[[1,0]],"dim":2})"
                                : R"({"vectors":[[1,0,0]],"dim":3})",
                    "application/json");
  });
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  HttpModelClient client(InferenceEndpoint{
      "http://127.0.0.1:" + std::to_string(port), 2000, 0, {}});
  EXPECT_EQ(client.Embed({"x"})[0].dim(), 2u);
  EXPECT_THROW(client.Embed({"x"}), Error);
  server.stop();
  t.join();
}

TEST(HttpClientTest, RaggedBatchRejected) {
  CountingServer ragged(200, R"({"vectors":[[1,0],[1]],"dim":2})");
  HttpModelClient client(InferenceEndpoint{ragged.url(), 2000, 0, {}});
  EXPECT_THROW(client.Embed({"x", "y"}), Error);
}

TEST(HttpClientTest, RoundTripAgainstMockServer) {
  auto mock = std::make_shared<MockModelClient>();
  mock->SetGoldResponses({{"d3", "(3,2)"}});
  wire::Server server(mock);
  int port = server.Start("127.0.0.1");
  HttpModelClient client(InferenceEndpoint{
      "http://127.0.0.1:" + std::to_string(port), 5000, 0, {}});
  MockModelClient local;
  local.SetGoldResponses({{"d3", "(3,2)"}});

  std::string text = "she could see everything after surgery";
  EXPECT_EQ(client.GenerateReaction(text), local.GenerateReaction(text));
  auto remote = client.Embed({"happy", "the river flooded"});
  auto here = local.Embed({"happy", "the river flooded"});
  ASSERT_EQ(remote.size(), 2u);
  for (size_t i = 0; i < 2; ++i) EXPECT_EQ(remote[i].values, here[i].values);
  EXPECT_EQ(client.ClassifyPolarity("I cried all night"),
            local.ClassifyPolarity("I cried all night"));
  EXPECT_EQ(client.Complete("Document [d3]:\n1. a"), "(3,2)");
  EXPECT_EQ(client.Complete("x", DecodeOptions::Sampled(4)),
            MockModelClient::kMockRefusal);
  // Preconditions fail locally, before any request.
  EXPECT_THROW(client.Embed({}), PreconditionError);
  server.Stop();
}

TEST(HttpClientTest, PathPrefixKept) {
  httplib::Server server;
  std::atomic<int> hits{0};
  server.Post("/svc/v1/generate",
              [&](const httplib::Request &, httplib::Response &res) {
                ++hits;
                res.set_content(R"({"reaction":" None "})", "application/json");
              });
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  HttpModelClient client(InferenceEndpoint{
      "http://127.0.0.1:" + std::to_string(port) + "/svc/", 2000, 0, {}});
  EXPECT_EQ(client.GenerateReaction("x"), "None");
  EXPECT_EQ(hits.load(), 1);
  server.stop();
  t.join();
}

TEST(HttpClientTest, ConcurrentRequests) {
  auto mock = std::make_shared<MockModelClient>();
  wire::Server server(mock);
  int port = server.Start("127.0.0.1");
  HttpModelClient client(InferenceEndpoint{
      "http://127.0.0.1:" + std::to_string(port), 5000, 0, {}});
  std::vector<std::thread> threads;
  std::atomic<int> mismatches{0};
  for (int w = 0; w < 8; ++w) {
    threads.emplace_back([&, w] {
      for (int i = 0; i < 10; ++i) {
        std::string text = "doc " + std::to_string(w) + "-" + std::to_string(i);
        if (client.GenerateReaction(text) != oracle::Reaction(text)) {
          ++mismatches;
        }
      }
    });
  }
  for (auto &t : threads) t.join();
  EXPECT_EQ(mismatches.load(), 0);
  server.Stop();
}

}  // namespace
}  // namespace ecforge
