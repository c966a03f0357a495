#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace kervature {

/// Worker count for parallel sections: KERVATURE_WORKERS if set, else the
/// hardware concurrency, clamped to [1, 32].
inline int worker_count() {
    if (const char* env = std::getenv("KERVATURE_WORKERS")) {
        int n = std::atoi(env);
        if (n >= 1) return std::min(n, 32);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return std::max(1u, std::min(hw, 8u));
}

/// Runs fn(i) for i in [0, n).  Work is split into contiguous chunks; results
/// must be written to disjoint slots so the outcome is independent of the
/// worker count.  Exceptions from workers are rethrown on the caller thread.
inline void parallel_for(std::ptrdiff_t n, const std::function<void(std::ptrdiff_t)>& fn) {
    const int workers = std::min<std::ptrdiff_t>(worker_count(), n > 0 ? n : 1);
    if (workers <= 1 || n < 16) {
        for (std::ptrdiff_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::ptrdiff_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::ptrdiff_t lo = w * chunk, hi = std::min(n, lo + chunk);
        pool.emplace_back([&, w, lo, hi] {
            try {
                for (std::ptrdiff_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace kervature
