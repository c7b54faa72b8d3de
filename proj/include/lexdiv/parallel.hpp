#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace lexdiv {

// Runs fn(i) for i in [0, n) on a bounded worker set. worker_cap 0 means
// hardware concurrency. Work items must be independent; callers keep output
// deterministic by writing results into slot i.
inline void parallel_for(std::size_t n, unsigned worker_cap,
                         const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    unsigned workers = worker_cap > 0 ? worker_cap : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    if (static_cast<std::size_t>(workers) > n) workers = static_cast<unsigned>(n);
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        threads.emplace_back([&] {
            while (!failed.load(std::memory_order_relaxed)) {
                const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
                if (i >= n) break;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    failed.store(true, std::memory_order_relaxed);
                }
            }
        });
    }
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace lexdiv
