#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rproj {

/// Number of worker threads used by the parallel scans; 0 means hardware concurrency.
inline unsigned& thread_count() {
    static unsigned n = 0;
    return n;
}

inline unsigned effective_threads() {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    return thread_count() == 0 ? hw : thread_count();
}

/// Runs fn(i) for i in [0, n) on a static partition. Each index is
/// independent and writes only its own output slot, so results do not depend
/// on the thread count.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const std::size_t workers = std::min<std::size_t>(effective_threads(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

/// SplitMix64 finaliser; derives independent per-task seeds from a run seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace rproj
