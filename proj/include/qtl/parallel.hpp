// Copyright 2026 The QTL Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QTL_PARALLEL_HPP
#define QTL_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "qtl/rng.hpp"

namespace qtl {

/// Worker cap: QTL_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

/// Calls fn(i) for every i in [0, count) on up to worker_count() threads.
/// The first exception thrown by any task is rethrown on the caller.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

inline constexpr std::size_t kChunkSize = 2048;

/// Runs `samples` independent draws of `draw(RngStream&)`. Draws are split
/// into fixed-size chunks, chunk c using root.substream(c), so the result
/// vector is identical for any thread count.
template <class Draw>
auto sample_chunked(std::size_t samples, RngStream& rng, Draw&& draw) {
  using Value = decltype(draw(rng));
  std::vector<Value> out(samples);
  const RngStream root = rng.fork();
  const std::size_t chunks = (samples + kChunkSize - 1) / kChunkSize;
  parallel_for(chunks, [&](std::size_t c) {
    RngStream local = root.substream(c);
    const std::size_t end = std::min(samples, (c + 1) * kChunkSize);
    for (std::size_t s = c * kChunkSize; s < end; ++s) out[s] = draw(local);
  });
  return out;
}

}  // namespace qtl

#endif  // QTL_PARALLEL_HPP
