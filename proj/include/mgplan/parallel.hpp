// Copyright 2026 The mgplan Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MGPLAN_PARALLEL_HPP_
#define MGPLAN_PARALLEL_HPP_

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace mgplan {

// Worker cap for parallel_for. 1 means fully sequential. Set once from the
// CLI's --threads flag; library results never depend on this value because
// every parallel loop writes only to its own index's output slot.
inline std::atomic<int>& max_threads() {
  static std::atomic<int> value{1};
  return value;
}

inline void set_max_threads(int n) { max_threads().store(n < 1 ? 1 : n); }

// Runs fn(i) for i in [0, n). Work is split into contiguous index blocks, one
// per worker; fn must not write shared state except through slot i.
template <typename Fn>
void parallel_for(int n, Fn&& fn) {
  const int workers = std::min({max_threads().load(), n,
                                static_cast<int>(std::thread::hardware_concurrency())});
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  const int block = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int lo = w * block;
    const int hi = std::min(n, lo + block);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        for (int i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace mgplan

#endif  // MGPLAN_PARALLEL_HPP_
