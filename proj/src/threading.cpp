#include "auif/threading.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace auif {

int worker_count() {
    static int cached = [] {
        int n = static_cast<int>(std::thread::hardware_concurrency());
        if (n < 1) n = 1;
        if (const char* env = std::getenv("AUIF_THREADS")) {
            int cap = std::atoi(env);
            if (cap >= 1) n = std::min(n, cap);
        }
        return n;
    }();
    return cached;
}

void parallel_for(size_t total, const std::function<void(size_t, size_t)>& fn) {
    if (total == 0) return;
    int workers = worker_count();
    size_t chunk = (total + workers - 1) / workers;
    if (workers == 1 || total < 2 * static_cast<size_t>(workers)) {
        fn(0, total);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int t = 1; t < workers; ++t) {
        size_t b = t * chunk, e = std::min(total, (t + 1) * chunk);
        if (b >= e) break;
        pool.emplace_back(fn, b, e);
    }
    fn(0, std::min(total, chunk));
    for (auto& th : pool) th.join();
}

}  // namespace auif
