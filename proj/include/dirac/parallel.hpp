#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace dirac {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Static split of [0, n_items) into one contiguous chunk per worker.
// fn(chunk_index, begin, end). Callers reduce per-chunk partials in chunk
// order, which keeps results bitwise stable at a fixed thread count.
template <typename F>
void parallel_chunks(int n_items, int threads, F&& fn) {
    const int workers = std::max(1, std::min(resolve_threads(threads), n_items));
    if (workers <= 1) {
        if (n_items > 0) fn(0, 0, n_items);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    const int base = n_items / workers, rem = n_items % workers;
    int begin = 0;
    for (int c = 0; c < workers; ++c) {
        const int len = base + (c < rem ? 1 : 0);
        pool.emplace_back(fn, c, begin, begin + len);
        begin += len;
    }
    for (auto& th : pool) th.join();
}

}  // namespace dirac
