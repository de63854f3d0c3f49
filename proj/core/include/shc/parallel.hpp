#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace shc::par {

inline int default_threads() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Deterministic block map-reduce over [0, n). Work is split into fixed-size
// blocks; workers claim blocks in any order but results are combined by a
// pairwise tree over block indices, so the reduction is identical for any
// worker count.
//
// BlockFn: State(long long block_index, long long begin, long long end)
// CombineFn: void(State& into, const State& from)
template <class State, class BlockFn, class CombineFn>
State map_reduce_blocks(long long n, long long block_size, int threads,
                        BlockFn block_fn, CombineFn combine) {
    if (n <= 0) return State{};
    if (block_size <= 0) block_size = 1;
    const long long n_blocks = (n + block_size - 1) / block_size;
    std::vector<State> results(static_cast<size_t>(n_blocks));

    std::atomic<long long> next{0};
    auto worker = [&] {
        for (;;) {
            const long long b = next.fetch_add(1, std::memory_order_relaxed);
            if (b >= n_blocks) break;
            const long long lo = b * block_size;
            const long long hi = std::min(n, lo + block_size);
            results[static_cast<size_t>(b)] = block_fn(b, lo, hi);
        }
    };

    if (threads <= 1 || n_blocks == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        const int n_threads = static_cast<int>(std::min<long long>(threads, n_blocks));
        pool.reserve(static_cast<size_t>(n_threads));
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // pairwise tree: combine (i, i+stride) for stride = 1, 2, 4, ...
    for (long long stride = 1; stride < n_blocks; stride *= 2) {
        for (long long i = 0; i + stride < n_blocks; i += 2 * stride) {
            combine(results[static_cast<size_t>(i)],
                    results[static_cast<size_t>(i + stride)]);
        }
    }
    return results[0];
}

} // namespace shc::par
