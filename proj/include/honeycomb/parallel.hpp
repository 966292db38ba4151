#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace honeycomb {

inline int default_workers() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

// Runs fn(begin, end) over a static block partition of [0, n).  Results must
// be written to disjoint, preallocated slots; the partition does not depend
// on the worker count's scheduling, so output is identical for any `workers`.
inline void parallel_for_blocks(int n, int workers, const std::function<void(int, int)>& fn) {
    workers = std::clamp(workers <= 0 ? default_workers() : workers, 1, std::max(n, 1));
    if (workers == 1 || n <= 1) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    int chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        int begin = w * chunk;
        int end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(fn, begin, end);
    }
    for (auto& t : pool) t.join();
}

}  // namespace honeycomb
