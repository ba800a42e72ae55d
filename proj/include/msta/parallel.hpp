#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace msta {

inline unsigned default_threads() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

// Index-parallel map with deterministic output placement: fn(i, worker) runs
// for every i in [0, count), results land wherever fn writes them (indexed by
// i), so the reduction order downstream never depends on scheduling.  Each
// worker gets a stable worker id in [0, threads) for per-thread scratch
// (FFT workspaces are not shareable across threads).
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i, 0u);
        return;
    }
    if (threads > count) threads = unsigned(count);
    std::atomic<std::size_t> cursor{0};
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (;;) {
                    std::size_t i = cursor.fetch_add(1);
                    if (i >= count || failed.load()) break;
                    fn(i, w);
                }
            } catch (...) {
                if (!failed.exchange(true)) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failed.load()) std::rethrow_exception(first_error);
}

} // namespace msta
