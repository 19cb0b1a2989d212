#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cpd {

// Runs fn(i) for i in [0, n) across hardware threads. Work is assigned by
// index stride, so results written to slot i are deterministic regardless of
// scheduling. The first exception thrown by any task is rethrown.
template <typename F>
void parallel_for(std::size_t n, F&& fn, unsigned thread_count = 0) {
    if (n == 0) return;
    if (thread_count == 0) thread_count = std::max(1u, std::thread::hardware_concurrency());
    thread_count = static_cast<unsigned>(std::min<std::size_t>(thread_count, n));
    if (thread_count <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    workers.reserve(thread_count);
    for (unsigned t = 0; t < thread_count; ++t) {
        workers.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < n; i += thread_count) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& w : workers) w.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace cpd
