#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace beamstab {

/// Worker count for fan-out jobs: BEAMSTAB_THREADS when set to a positive
/// integer, otherwise the hardware concurrency.
inline std::size_t worker_limit() {
    if (const char* env = std::getenv("BEAMSTAB_THREADS")) {
        char* end = nullptr;
        const long value = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && value > 0) return static_cast<std::size_t>(value);
    }
    return std::max<std::size_t>(std::thread::hardware_concurrency(), 1);
}

/// Calls job(i) for i in [0, count) on up to worker_limit() threads. Jobs
/// must not share mutable state. The first exception thrown is rethrown.
template <class Job>
void parallel_for(std::size_t count, Job&& job) {
    const std::size_t workers = std::min(worker_limit(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    job(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace beamstab
