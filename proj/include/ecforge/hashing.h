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

#ifndef ECFORGE_HASHING_H_
#define ECFORGE_HASHING_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace ecforge {

// 64-bit FNV-1a over the raw bytes.
uint64_t Fnv1a64(std::string_view bytes);

// SplitMix64 finalizer. Spreads FNV output so that low bits are usable
// for bucketing.
uint64_t Mix64(uint64_t x);

// Mix64(Fnv1a64(bytes)). The key every mock rule is derived from.
inline uint64_t ContentKey(std::string_view bytes) {
  return Mix64(Fnv1a64(bytes));
}

// 16 lowercase hex digits.
std::string HexDigest(uint64_t value);

// HexDigest(Fnv1a64(bytes)); used for content addressing and manifests.
inline std::string ContentHash(std::string_view bytes) {
  return HexDigest(Fnv1a64(bytes));
}

}  // namespace ecforge

#endif  // ECFORGE_HASHING_H_
