#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace gicb {

/// Worker count: hardware concurrency capped by the GICB_THREADS
/// environment variable (>=1).
inline int thread_count() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("GICB_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1 && cap < n) n = cap;
    }
    return n;
}

/// Runs body(begin, end) over contiguous chunks of [0, count). Reductions in
/// the bodies must be order-independent (pointwise min/max over disjoint or
/// idempotent state) so that any thread count yields bit-identical results.
inline void parallel_chunks(int count, const std::function<void(int, int)>& body) {
    const int workers = std::min(thread_count(), std::max(count, 1));
    if (workers <= 1 || count <= 1) {
        body(0, count);
        return;
    }
    std::vector<std::thread> pool;
    const int chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int b = w * chunk;
        const int e = std::min(count, b + chunk);
        if (b >= e) break;
        pool.emplace_back(body, b, e);
    }
    for (auto& t : pool) t.join();
}

} // namespace gicb
