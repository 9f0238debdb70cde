#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace limitset {

/// Worker count for data-parallel loops. Capped by the LIMITSET_THREADS
/// environment variable when set; defaults to hardware concurrency.
inline int worker_count() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("LIMITSET_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) return std::min(cap, 256);
    }
    return hw;
}

namespace detail {
constexpr std::size_t kChunk = 16384;  // fixed, independent of thread count
}

/// Deterministic chunked reduction: the index range is split into fixed-size
/// chunks, chunk partials are computed (possibly on several threads) and
/// merged strictly in chunk order, so the result is identical for any number
/// of workers.
template <typename T, typename ChunkFn, typename MergeFn>
T chunked_reduce(std::size_t n, T init, ChunkFn chunk_fn, MergeFn merge) {
    if (n == 0) return init;
    const std::size_t nchunks = (n + detail::kChunk - 1) / detail::kChunk;
    std::vector<T> partial(nchunks, init);
    auto run = [&](std::size_t c) {
        const std::size_t lo = c * detail::kChunk;
        const std::size_t hi = std::min(n, lo + detail::kChunk);
        partial[c] = chunk_fn(lo, hi);
    };
    const int workers = std::min<std::size_t>(worker_count(), nchunks);
    if (workers <= 1) {
        for (std::size_t c = 0; c < nchunks; ++c) run(c);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t c = w; c < nchunks; c += workers) run(c);
            });
        }
        for (auto& t : pool) t.join();
    }
    T acc = init;
    for (std::size_t c = 0; c < nchunks; ++c) acc = merge(acc, partial[c]);
    return acc;
}

/// Deterministic parallel for: body(i) must write only to slot i of
/// preallocated output (no cross-index state).
template <typename BodyFn>
void parallel_for(std::size_t n, BodyFn body) {
    if (n == 0) return;
    const std::size_t nchunks = (n + detail::kChunk - 1) / detail::kChunk;
    const int workers = static_cast<int>(std::min<std::size_t>(worker_count(), nchunks));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t c = w; c < nchunks; c += static_cast<std::size_t>(workers)) {
                const std::size_t lo = c * detail::kChunk;
                const std::size_t hi = std::min(n, lo + detail::kChunk);
                for (std::size_t i = lo; i < hi; ++i) body(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

inline double chunked_sum(std::size_t n, const std::function<double(std::size_t)>& term) {
    return chunked_reduce<double>(
        n, 0.0,
        [&](std::size_t lo, std::size_t hi) {
            double s = 0.0;
            for (std::size_t i = lo; i < hi; ++i) s += term(i);
            return s;
        },
        [](double a, double b) { return a + b; });
}

}  // namespace limitset
