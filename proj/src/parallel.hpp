#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace tomoqa::detail {

// Worker count: TOMOQA_THREADS when set (>= 1), else hardware concurrency.
inline int thread_cap() {
    if (const char* env = std::getenv("TOMOQA_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs fn(i) for i in [0, count). Results must be written to
// index-addressed slots so the outcome is independent of scheduling.
inline void parallel_for(int count, const std::function<void(int)>& fn) {
    const int workers = std::min(thread_cap(), count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace tomoqa::detail
