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

#include <cstdio>

#include "ecforge/errors.h"
#include "ecforge/hashing.h"
#include "ecforge/shuffle.h"

namespace ecforge {

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kData:
    case ErrorKind::kPrecondition:
      return 1;
    case ErrorKind::kTransport:
      return 2;
    case ErrorKind::kConfig:
      return 3;
  }
  return 1;
}

uint64_t Fnv1a64(std::string_view bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

uint64_t Mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string HexDigest(uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(value));
  return buf;
}

uint64_t UniformBelow(std::mt19937_64 &rng, uint64_t bound) {
  if (bound <= 1) return 0;
  // Largest multiple of bound that fits; reject draws above it.
  uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
  uint64_t draw;
  do {
    draw = rng();
  } while (draw > limit);
  return draw % bound;
}

std::vector<size_t> SeededPermutation(size_t n, uint64_t seed) {
  std::vector<size_t> perm(n);
  for (size_t i = 0; i < n; ++i) perm[i] = i;
  SeededShuffle(perm, seed);
  return perm;
}

}  // namespace ecforge
