#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace wislab {

/// Resolves a thread-count request: 0 means hardware concurrency, minimum 1.
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(begin, end) over contiguous chunks of [0, n), possibly on several
/// threads. Every item is processed by exactly one call, so results are
/// bit-identical for any thread count as long as fn's work per item does not
/// depend on the chunk boundaries (each output element owned by one item).
inline void parallel_chunks(std::size_t n, int threads,
                            const std::function<void(std::size_t, std::size_t)>& fn) {
    threads = resolve_threads(threads);
    if (n == 0) return;
    const std::size_t want = static_cast<std::size_t>(threads);
    if (want <= 1 || n == 1) {
        fn(0, n);
        return;
    }
    const std::size_t n_chunks = std::min(n, want);
    const std::size_t base = n / n_chunks;
    const std::size_t extra = n % n_chunks;
    std::vector<std::thread> pool;
    pool.reserve(n_chunks);
    std::size_t begin = 0;
    for (std::size_t c = 0; c < n_chunks; ++c) {
        const std::size_t len = base + (c < extra ? 1 : 0);
        const std::size_t end = begin + len;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
        begin = end;
    }
    for (auto& t : pool) t.join();
}

}  // namespace wislab
