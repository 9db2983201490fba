#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace cvplan {

// Runs fn(i) for i in [0, count) over a fixed static partition. Every
// iteration writes only to its own preallocated slot and the reduction
// happens serially afterwards, so results are identical for any thread
// count. threads = 0 picks the hardware count, 1 runs inline.
inline void parallel_for(int count, const std::function<void(int)>& fn,
                         int threads = 0) {
    if (threads == 0) {
        threads = static_cast<int>(std::thread::hardware_concurrency());
        if (threads < 1) threads = 1;
    }
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
            for (int i = t; i < count; i += threads) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace cvplan
