#include "oilab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace oilab {

namespace {

std::atomic<std::size_t> g_threads{0};  // 0 = use hardware concurrency

std::size_t effective_threads() {
    std::size_t n = g_threads.load(std::memory_order_relaxed);
    if (n == 0) n = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    return n;
}

} // namespace

std::size_t thread_count() { return effective_threads(); }

void set_thread_count(std::size_t n) { g_threads.store(n, std::memory_order_relaxed); }

void parallel_chunks(std::size_t total, std::size_t chunk_size,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
    if (total == 0) return;
    if (chunk_size == 0) chunk_size = 1;
    const std::size_t num_chunks = (total + chunk_size - 1) / chunk_size;
    const std::size_t workers = std::min(effective_threads(), num_chunks);

    if (workers <= 1) {
        for (std::size_t c = 0; c < num_chunks; ++c)
            fn(c, c * chunk_size, std::min(total, (c + 1) * chunk_size));
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto work = [&]() {
        for (;;) {
            const std::size_t c = next.fetch_add(1, std::memory_order_relaxed);
            if (c >= num_chunks) return;
            try {
                fn(c, c * chunk_size, std::min(total, (c + 1) * chunk_size));
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

std::size_t parallel_range_workers(std::size_t total) {
    return std::max<std::size_t>(1, std::min(effective_threads(), total));
}

void parallel_ranges(std::size_t total,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
    if (total == 0) return;
    const std::size_t workers = parallel_range_workers(total);
    if (workers == 1) {
        fn(0, 0, total);
        return;
    }

    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&](std::size_t w) {
        const std::size_t begin = total * w / workers;
        const std::size_t end = total * (w + 1) / workers;
        try {
            fn(w, begin, end);
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace oilab
