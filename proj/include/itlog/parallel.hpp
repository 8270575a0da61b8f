#ifndef ITLOG_PARALLEL_HPP
#define ITLOG_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace itlog {

// Global worker count used by parallel_for.  0 means "hardware concurrency".
void set_max_threads(unsigned n);
unsigned max_threads();

// Deterministic parallel map: each index i in [0, n) is processed exactly
// once by fn(i), and fn must write its result into a slot owned by i
// (typically out[i]).  Work is handed out through a shared atomic counter,
// so the *schedule* varies between runs, but because reductions are done
// sequentially by the caller afterwards the numerical output never does.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    unsigned workers = max_threads();
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    if (workers > n) workers = static_cast<unsigned>(n);
    std::atomic<std::size_t> next{0};
    auto body = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
}

} // namespace itlog

#endif
