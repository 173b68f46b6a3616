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

#ifndef ECFORGE_PARALLEL_H_
#define ECFORGE_PARALLEL_H_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace ecforge {

// Runs fn(i) for every i in [0, n) on at most `workers` threads. Work is
// handed out by an atomic cursor, so callers must write results by index
// to keep output order independent of completion order. The first
// exception thrown by fn is rethrown after all threads join.
inline void ParallelFor(size_t n, int workers,
                        const std::function<void(size_t)> &fn) {
  size_t threads = std::clamp<size_t>(workers < 1 ? 1 : workers, 1,
                                      std::max<size_t>(n, 1));
  if (threads <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < n && !failed; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!first_error) first_error = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto &th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace ecforge

#endif  // ECFORGE_PARALLEL_H_
