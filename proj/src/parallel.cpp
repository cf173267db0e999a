#include "rotdev/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rotdev {

namespace {

int initial_workers() {
    if (const char* env = std::getenv("RD_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::atomic<int>& workers() {
    static std::atomic<int> w{initial_workers()};
    return w;
}

} // namespace

int worker_count() { return workers().load(); }

void set_worker_count(int n) { workers().store(std::max(1, n)); }

void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t, int)>& body) {
    if (n == 0) return;
    const int w = static_cast<int>(std::min<std::size_t>(worker_count(), n));
    if (w <= 1) {
        body(0, n, 0);
        return;
    }
    std::vector<std::thread> threads;
    std::exception_ptr error;
    std::mutex error_mutex;
    const std::size_t chunk = (n + w - 1) / w;
    for (int k = 0; k < w; ++k) {
        const std::size_t b = k * chunk;
        const std::size_t e = std::min(n, b + chunk);
        if (b >= e) break;
        threads.emplace_back([&, b, e, k] {
            try {
                body(b, e, k);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace rotdev
