#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace commdet {

/// Run fn(begin, end) over [0, n) split across `workers` threads. With one
/// worker the call is inlined on the current thread. Chunks are fixed by
/// (n, workers) alone, so outputs written to disjoint ranges are identical
/// for any worker count.
template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
    if (n == 0) return;
    if (workers <= 1 || n == 1) {
        fn(std::size_t{0}, n);
        return;
    }
    const unsigned used = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    const std::size_t chunk = (n + used - 1) / used;
    std::vector<std::thread> threads;
    threads.reserve(used);
    for (unsigned w = 0; w < used; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(begin + chunk, n);
        if (begin >= end) break;
        threads.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& t : threads) t.join();
}

}  // namespace commdet
