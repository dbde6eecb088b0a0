#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace w2s {

// Worker cap taken from the W2S_THREADS environment variable.
// Unset or 0 means "auto" (hardware concurrency); always at least 1.
unsigned thread_cap();

// Runs fn(lo, hi) over [0, n) split into fixed-size chunks. The chunk grid is
// independent of the worker count, so callers that write disjoint slots or
// fold exact values (integer sums, max) get identical results no matter how
// many threads run. fn must not throw.
template <typename Fn>
void parallel_chunks(std::size_t n, std::size_t chunk, Fn fn) {
    if (n == 0) return;
    if (chunk == 0) chunk = 1;
    const std::size_t n_chunks = (n + chunk - 1) / chunk;
    unsigned workers = thread_cap();
    if (workers > n_chunks) workers = static_cast<unsigned>(n_chunks);
    if (workers <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c) {
            const std::size_t lo = c * chunk;
            fn(lo, std::min(n, lo + chunk));
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t c = next.fetch_add(1, std::memory_order_relaxed);
                if (c >= n_chunks) return;
                const std::size_t lo = c * chunk;
                fn(lo, std::min(n, lo + chunk));
            }
        });
    }
    for (auto& t : pool) t.join();
}

// Chunked map-reduce with a deterministic in-order fold of the partials.
template <typename R, typename MapFn, typename CombineFn>
R chunked_reduce(std::size_t n, std::size_t chunk, R init, MapFn map_chunk, CombineFn combine) {
    if (n == 0) return init;
    if (chunk == 0) chunk = 1;
    const std::size_t n_chunks = (n + chunk - 1) / chunk;
    std::vector<R> partial(n_chunks, init);
    parallel_chunks(n, chunk, [&](std::size_t lo, std::size_t hi) {
        partial[lo / chunk] = map_chunk(lo, hi);
    });
    R out = init;
    for (const R& p : partial) out = combine(out, p);
    return out;
}

}  // namespace w2s
