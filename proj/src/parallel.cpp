// SPDX-License-Identifier: Apache-2.0
#include "parallel.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace subseg {

int resolve_threads(int requested) {
  if (requested < 1) return 1;
  return std::min(requested, 64);
}

void parallel_chunks(size_t n, int threads,
                     const std::function<void(size_t, size_t, size_t)>& fn) {
  const size_t workers = std::min<size_t>(std::max(resolve_threads(threads), 1), n ? n : 1);
  if (workers <= 1 || n == 0) {
    fn(0, 0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const size_t per = (n + workers - 1) / workers;
  for (size_t w = 0; w < workers; ++w) {
    const size_t begin = w * per;
    const size_t end = std::min(n, begin + per);
    if (begin >= end) break;
    pool.emplace_back([&, w, begin, end] { fn(w, begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace subseg
