#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace csar {

/// Worker count from CSAR_THREADS (0 or unset = hardware concurrency).
unsigned default_worker_count();

/// Resolves a requested count; 0 means default_worker_count().
inline unsigned resolve_worker_count(unsigned requested) {
    return requested == 0 ? default_worker_count() : requested;
}

/// Runs fn(begin, end) over [0, count) split into chunks of `grain`, on up to
/// `workers` threads. Chunks are handed out dynamically; callers must make each
/// index's result independent of which thread ran it.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t grain, unsigned workers, Fn&& fn) {
    if (count == 0) return;
    if (grain == 0) grain = 1;
    const std::size_t chunks = (count + grain - 1) / grain;
    workers = resolve_worker_count(workers);
    if (workers <= 1 || chunks == 1) {
        fn(std::size_t{0}, count);
        return;
    }
    if (workers > chunks) workers = static_cast<unsigned>(chunks);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto body = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1, std::memory_order_relaxed);
            if (c >= chunks) return;
            const std::size_t begin = c * grain;
            const std::size_t end = begin + grain < count ? begin + grain : count;
            try {
                fn(begin, end);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(chunks, std::memory_order_relaxed);
                return;
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

} // namespace csar
