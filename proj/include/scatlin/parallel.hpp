#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace scatlin {

/// Splits [0, count) into `workers` contiguous shards and runs
/// body(begin, end, worker) on each. Shard w always covers the same range, so
/// callers that write results by index get a canonical merge for free.
/// The first exception thrown by any shard is rethrown on the caller.
template <class Body>
void parallel_for(std::uint64_t count, unsigned workers, Body&& body) {
    workers = std::max(1u, workers);
    if (workers == 1 || count < 2) {
        body(std::uint64_t{0}, count, 0u);
        return;
    }
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, count));
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex mu;
    const std::uint64_t chunk = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t b = w * chunk, e = std::min(count, b + chunk);
        pool.emplace_back([&, b, e, w] {
            try {
                body(b, e, w);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!failure)
                    failure = std::current_exception();
            }
        });
    }
    for (auto& th : pool)
        th.join();
    if (failure)
        std::rethrow_exception(failure);
}

inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace scatlin
