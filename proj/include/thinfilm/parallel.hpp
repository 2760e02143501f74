#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace thinfilm {

/// Default worker count: the machine's hardware concurrency (at least 1).
inline int default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

/**
 * @brief Runs fn(k) for k in [0, count) on up to `workers` threads.
 *
 * Each index runs exactly once; results must be written to per-index slots so
 * the outcome does not depend on scheduling. The exception of the lowest
 * failing index is rethrown after all workers finish.
 */
template <typename Fn>
void parallel_for(int count, int workers, Fn&& fn) {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(std::max(count, 0)));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int k = next++; k < count; k = next++) {
            try {
                fn(k);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    const int n_threads = std::clamp(workers, 1, std::max(count, 1));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace thinfilm
