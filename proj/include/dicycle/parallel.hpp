#pragma once

#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace dicycle {

inline constexpr const char* threads_env_var = "DICYCLE_THREADS";

/// Worker count: DICYCLE_THREADS if set to a positive integer, else hardware concurrency.
inline std::size_t default_thread_count()
{
    if (const char* env = std::getenv(threads_env_var)) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (...) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Runs fn(worker, index) for index in [0, count) with dynamic scheduling.
/// Callers reduce per-worker partials in worker order, so results never depend on the schedule
/// as long as the reduction is commutative.
template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn)
{
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(std::size_t{0}, i);
        return;
    }
    threads = std::min(threads, count);
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(w, i);
        });
    }
}

} // namespace dicycle
