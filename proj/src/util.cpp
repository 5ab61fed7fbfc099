#include "galactic/util.hpp"

#include <cstdlib>
#include <thread>

namespace galactic {

int env_thread_cap() {
    const char* raw = std::getenv("GALACTIC_THREADS");
    if (raw == nullptr || *raw == '\0') return 0;
    char* end = nullptr;
    long v = std::strtol(raw, &end, 10);
    if (end == raw || v < 1) return 1;
    return static_cast<int>(v);
}

void parallel_for(int n, const std::function<void(int)>& fn, int max_threads) {
    if (n <= 0) return;
    int cap = env_thread_cap();
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    int threads = max_threads > 0 ? max_threads : hw;
    if (cap > 0) threads = std::min(threads, cap);
    threads = std::min(threads, n);

    if (threads <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
            for (int i = t; i < n; i += threads) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace galactic
