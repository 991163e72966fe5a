#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace sst {

// Runs fn(begin, end) over contiguous chunks of [0, n). Chunk boundaries
// depend only on (n, threads), so work partitioning is reproducible.
template <typename Fn>
void parallel_chunks(size_t n, int threads, Fn&& fn) {
    if (threads <= 1 || n < 2) {
        fn(size_t{0}, n);
        return;
    }
    const size_t workers = std::min<size_t>(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (size_t w = 0; w < workers; ++w) {
        const size_t begin = n * w / workers;
        const size_t end = n * (w + 1) / workers;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace sst
