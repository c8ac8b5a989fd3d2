#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace klrfurl {

inline int worker_count() {
    const char* env = std::getenv("KLRFURL_WORKERS");
    if (!env) return 1;
    int w = std::atoi(env);
    return w < 1 ? 1 : w;
}

// ordered parallel map; results merge in input order regardless of timing
template <class T, class F>
auto parallel_map(const std::vector<T>& items, F f) -> std::vector<decltype(f(items[0]))> {
    using R = decltype(f(items[0]));
    std::vector<R> out(items.size());
    int workers = worker_count();
    if (workers <= 1 || items.size() <= 1) {
        for (std::size_t i = 0; i < items.size(); ++i) out[i] = f(items[i]);
        return out;
    }
    std::vector<std::thread> pool;
    std::size_t chunk = (items.size() + static_cast<std::size_t>(workers) - 1) / static_cast<std::size_t>(workers);
    for (int w = 0; w < workers; ++w) {
        std::size_t lo = static_cast<std::size_t>(w) * chunk;
        std::size_t hi = std::min(items.size(), lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) out[i] = f(items[i]);
        });
    }
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace klrfurl
