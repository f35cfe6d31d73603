#include "safezone/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace safezone {

int worker_count() {
    if (const char* env = std::getenv("SAFEZONE_THREADS")) {
        int requested = std::atoi(env);
        if (requested >= 1) return requested;
        return 1;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int64_t n, const std::function<void(int64_t)>& body) {
    if (n <= 0) return;
    int workers = worker_count();
    if (workers <= 1 || n == 1) {
        for (int64_t i = 0; i < n; ++i) body(i);
        return;
    }
    if (static_cast<int64_t>(workers) > n) workers = static_cast<int>(n);

    std::atomic<int64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                int64_t i = next.fetch_add(1, std::memory_order_relaxed);
                if (i >= n) return;
                body(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace safezone
