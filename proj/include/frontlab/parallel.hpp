#pragma once

// Minimal fork-join helpers. Work is split by index, never by scheduling,
// so any function whose chunks are independent gives identical results for
// every thread count.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace frontlab {

inline int default_thread_count() {
    if (const char* env = std::getenv("FRONTLAB_THREADS")) {
        const int k = std::atoi(env);
        if (k >= 1) return k;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(begin, end) over disjoint chunks of [0, count).
template <typename Fn>
void parallel_chunks(std::int64_t count, int threads, Fn&& fn) {
    threads = std::max(1, std::min<std::int64_t>(threads, count));
    if (threads == 1 || count <= 1) {
        if (count > 0) fn(std::int64_t{0}, count);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::int64_t chunk = (count + threads - 1) / threads;
    for (int k = 0; k < threads; ++k) {
        const std::int64_t lo = k * chunk;
        const std::int64_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] { fn(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

// Runs fn(i) for every i in [0, count) with dynamic load balancing; fn must
// write only to its own slot of any shared output.
template <typename Fn>
void parallel_for(std::int64_t count, int threads, Fn&& fn) {
    threads = std::max(1, std::min<std::int64_t>(threads, count));
    if (threads == 1) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int k = 0; k < threads; ++k) {
        pool.emplace_back([count, &next, &fn] {
            for (;;) {
                const std::int64_t i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace frontlab
