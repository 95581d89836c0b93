#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace leaky {

// Runs fn(i) for i in [0, count) on up to `jobs` threads. Each index is
// claimed once; fn must write only into its own output slot, so results are
// identical for any thread count. Exceptions are captured and rethrown on
// the calling thread.
inline void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs < 1) jobs = 1;
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(jobs), count == 0 ? 1 : count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count || failed.load()) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!failed.exchange(true)) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failed.load()) std::rethrow_exception(error);
}

// Blocked deterministic reduction: splits [0, count) into fixed-size blocks,
// evaluates block_sum on each (in parallel), and adds the partial sums in
// block order. The result is bit-identical for any `jobs`.
inline double parallel_block_sum(std::size_t count, std::size_t block_size, int jobs,
                                 const std::function<double(std::size_t, std::size_t)>& block_sum) {
    if (block_size == 0) block_size = 1;
    const std::size_t blocks = (count + block_size - 1) / block_size;
    std::vector<double> partial(blocks, 0.0);
    parallel_for(blocks, jobs, [&](std::size_t b) {
        const std::size_t lo = b * block_size;
        const std::size_t hi = std::min(count, lo + block_size);
        partial[b] = block_sum(lo, hi);
    });
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

}  // namespace leaky
