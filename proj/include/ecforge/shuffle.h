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

#ifndef ECFORGE_SHUFFLE_H_
#define ECFORGE_SHUFFLE_H_

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace ecforge {

// Uniform integer in [0, bound) drawn from mt19937_64 by rejection
// sampling. std::uniform_int_distribution is implementation-defined, so
// it is avoided to keep shuffles identical across standard libraries.
uint64_t UniformBelow(std::mt19937_64 &rng, uint64_t bound);

// Seeded Fisher-Yates ("mt19937_64 Fisher-Yates"): for i from n-1 down
// to 1, swap element i with element UniformBelow(rng, i + 1). The engine
// is std::mt19937_64 constructed from the seed, whose output sequence
// is fixed by the C++ standard.
template <typename T>
void SeededShuffle(std::vector<T> &items, uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (size_t i = items.size(); i > 1; --i) {
    size_t j = UniformBelow(rng, i);
    std::swap(items[i - 1], items[j]);
  }
}

// Permutation of [0, n) produced by SeededShuffle.
std::vector<size_t> SeededPermutation(size_t n, uint64_t seed);

}  // namespace ecforge

#endif  // ECFORGE_SHUFFLE_H_
