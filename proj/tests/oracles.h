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

// Independent reference implementations used as test oracles. None of
// these call into the library code they check.

#ifndef ECFORGE_TESTS_ORACLES_H_
#define ECFORGE_TESTS_ORACLES_H_

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

// FNV-1a over bytes, then the SplitMix64 finalizer.
inline uint64_t Key(const std::string &s) {
  uint64_t h = 14695981039346656037ULL;
  for (size_t i = 0; i < s.size(); ++i) {
    h = (h ^ static_cast<uint8_t>(s[i])) * 1099511628211ULL;
  }
  uint64_t z = h + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::string Strip(const std::string &s) {
  size_t b = s.find_first_not_of(" \t\n\r\f\v");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\n\r\f\v");
  return s.substr(b, e - b + 1);
}

// Mock none-bucket rule: key mod 10^4 below round(fraction * 10^4).
inline bool NoneBucket(const std::string &text, double fraction = 0.43) {
  uint64_t threshold = static_cast<uint64_t>(fraction * 10000.0 + 0.5);
  return Key(Strip(text)) % 10000 < threshold;
}

inline const std::vector<std::string> &Reactions() {
  static const std::vector<std::string> r = {
      "happy",   "sad",    "angry",  "afraid",  "surprised", "disgusted",
      "relieved", "grateful", "worried", "excited", "upset", "proud",
      "lonely",  "nervous", "satisfied", "embarrassed"};
  return r;
}

inline std::string Reaction(const std::string &text, double fraction = 0.43) {
  if (NoneBucket(text, fraction)) return "none";
  return Reactions()[(Key(Strip(text)) >> 32) % 16];
}

// Lowercased ASCII alphanumeric runs; bytes >= 0x80 count as word bytes.
inline std::vector<std::string> Words(const std::string &text) {
  std::vector<std::string> out(1);
  for (char ch : text) {
    unsigned char c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || c >= 0x80) {
      out.back().push_back(static_cast<char>(c >= 0x80 ? c : std::tolower(c)));
    } else if (!out.back().empty()) {
      out.emplace_back();
    }
  }
  if (out.back().empty()) out.pop_back();
  return out;
}

// Mock embedder: signed feature hashing of word and boundary-padded
// character trigram features, then L2 normalization.
inline std::vector<double> Embed(const std::string &text, size_t dim = 64) {
  std::vector<double> v(dim, 0.0);
  auto bump = [&](const std::string &feature, double w) {
    uint64_t k = Key(feature);
    v[k % dim] += (k & (1ULL << 63)) ? -w : w;
  };
  std::vector<std::string> words = Words(text);
  if (words.empty()) bump("t:" + text, 1.0);
  for (const std::string &w : words) {
    bump("w:" + w, 1.0);
    std::string p = "^" + w + "$";
    for (size_t i = 0; i + 3 <= p.size(); ++i) bump("g:" + p.substr(i, 3), 0.5);
  }
  double n = 0.0;
  for (double x : v) n += x * x;
  n = std::sqrt(n);
  if (n == 0.0) {
    v[Key(text) % dim] = 1.0;
  } else {
    for (double &x : v) x /= n;
  }
  return v;
}

inline double Cos(const std::vector<double> &a, const std::vector<double> &b) {
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return ab / (std::sqrt(aa) * std::sqrt(bb));
}

inline const std::vector<std::string> &Labels() {
  static const std::vector<std::string> l = {
      "fear", "disgust", "sadness", "happiness", "surprise", "anger",
      "neutral"};
  return l;
}

// Scores all seven labels, then orders by insertion: each label goes
// after every label with a score >= its own.
inline std::vector<std::pair<std::string, double>> Distribution(
    const std::string &reaction, size_t dim = 64) {
  std::vector<double> r = Embed(reaction, dim);
  std::vector<std::pair<std::string, double>> out;
  for (const std::string &label : Labels()) {
    double s = Cos(r, Embed(label, dim));
    size_t at = 0;
    while (at < out.size() && out[at].second >= s) ++at;
    out.insert(out.begin() + static_cast<long>(at), {label, s});
  }
  return out;
}

// Counts exact matches with a double loop.
inline size_t CountMatches(const std::vector<std::pair<int, int>> &gold,
                           const std::vector<std::pair<int, int>> &pred) {
  size_t n = 0;
  for (const auto &g : gold) {
    for (const auto &p : pred) {
      if (g.first == p.first && g.second == p.second) {
        ++n;
        break;
      }
    }
  }
  return n;
}

// Round-robin selection by linear scan: each visit takes the highest
// similarity untaken entry, smallest id on ties.
inline std::vector<size_t> Select(const std::vector<std::vector<double>> &sim,
                                  const std::vector<std::string> &ids,
                                  size_t quota) {
  std::vector<bool> used(ids.size(), false);
  std::vector<size_t> picks;
  size_t target = std::min(quota, ids.size());
  while (picks.size() < target) {
    for (size_t e = 0; e < sim.size() && picks.size() < target; ++e) {
      long best = -1;
      for (size_t p = 0; p < ids.size(); ++p) {
        if (used[p]) continue;
        if (best < 0 || sim[e][p] > sim[e][best] ||
            (sim[e][p] == sim[e][best] && ids[p] < ids[best])) {
          best = static_cast<long>(p);
        }
      }
      used[best] = true;
      picks.push_back(static_cast<size_t>(best));
    }
  }
  return picks;
}

// Random set of distinct pairs with indices in [lo, hi].
inline std::set<std::pair<int, int>> RandomPairs(std::mt19937_64 &rng,
                                                 size_t size, int lo, int hi) {
  std::uniform_int_distribution<int> idx(lo, hi);
  std::set<std::pair<int, int>> out;
  while (out.size() < size) out.insert({idx(rng), idx(rng)});
  return out;
}

}  // namespace oracle

#endif  // ECFORGE_TESTS_ORACLES_H_
