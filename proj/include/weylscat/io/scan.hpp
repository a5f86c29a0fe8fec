// Copyright (c) 2026 weylscat developers
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

#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "record.hpp"

namespace weylscat::io {

// Evaluate fn(0..count-1) and stream the records in input order. Work is
// chunked so arbitrarily long scans stay memory-bounded; inside a chunk the
// points are computed in parallel (they are pure functions of the index) and
// written sequentially, which keeps the output bytes independent of the
// thread count.
inline void run_ordered(std::size_t count, unsigned threads,
                        const std::function<Record(std::size_t)>& fn,
                        RecordWriter& writer, std::size_t chunk = 1024) {
  if (threads == 0) threads = std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;

  std::vector<Record> buf;
  for (std::size_t base = 0; base < count; base += chunk) {
    const std::size_t n = std::min(chunk, count - base);
    buf.assign(n, Record{});
    if (threads == 1 || n == 1) {
      for (std::size_t i = 0; i < n; ++i) buf[i] = fn(base + i);
    } else {
      std::atomic<std::size_t> next{0};
      std::exception_ptr fail;
      std::mutex fail_mx;
      auto worker = [&]() {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= n) return;
          try {
            buf[i] = fn(base + i);
          } catch (...) {
            std::lock_guard<std::mutex> lock(fail_mx);
            if (!fail) fail = std::current_exception();
            return;
          }
        }
      };
      std::vector<std::thread> pool;
      const unsigned k = (unsigned)std::min<std::size_t>(threads, n);
      pool.reserve(k);
      for (unsigned t = 0; t < k; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
      if (fail) std::rethrow_exception(fail);
    }
    for (const auto& rec : buf) writer.write(rec);
  }
  writer.finish();
}

}  // namespace weylscat::io
