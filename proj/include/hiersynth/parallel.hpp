#pragma once

#include <cstdlib>
#include <thread>
#include <vector>

namespace hiersynth {

// Worker count: HIER_SYNTH_THREADS if set (clamped to >= 1), else the
// hardware concurrency.
inline unsigned default_thread_count() {
    if (const char* env = std::getenv("HIER_SYNTH_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) {
            return static_cast<unsigned>(v);
        }
        return 1;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Runs fn(i) for i in [0, n) over a fixed block partition.  Results must be
// written to disjoint slots; scheduling never affects values, so output is
// deterministic for any worker count.
template <typename F>
void parallel_for(std::size_t n, F&& fn) {
    unsigned workers = default_thread_count();
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t lo = w * chunk;
        std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) {
            break;
        }
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) {
                fn(i);
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
}

}  // namespace hiersynth
