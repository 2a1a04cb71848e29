#pragma once

#include <cstddef>
#include <cstdlib>
#include <thread>
#include <vector>

namespace hardylab {

/// Worker count: HARDYLAB_THREADS caps it, hardware concurrency is the default.
inline unsigned worker_count() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("HARDYLAB_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && static_cast<unsigned>(v) < hw) hw = static_cast<unsigned>(v);
    }
    return hw;
}

/// Runs fn(i) for i in [0, n).  Tasks must be independent; results should be
/// written to per-index slots so that aggregation does not depend on the
/// scheduling order.
template <class F>
void parallel_for(std::size_t n, F&& fn) {
    unsigned workers = worker_count();
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    if (workers > n) workers = static_cast<unsigned>(n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace hardylab
