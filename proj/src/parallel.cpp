#include "ckm/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace ckm {

int worker_count() {
    const char* env = std::getenv("CKM_THREADS");
    int requested = 0;
    if (env && *env) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v >= 0) requested = static_cast<int>(v);
    }
    if (requested <= 0) {
        unsigned hw = std::thread::hardware_concurrency();
        requested = hw ? static_cast<int>(hw) : 1;
    }
    return std::max(1, requested);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    const std::size_t workers = std::min<std::size_t>(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([begin, end, &fn, &failure, &failure_mutex] {
            try {
                for (std::size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

std::pair<double, std::size_t> parallel_min_index(
    std::size_t n, const std::function<double(std::size_t)>& score) {
    std::vector<double> values(n);
    parallel_for(n, [&](std::size_t i) { values[i] = score(i); });
    // (value, index) lexicographic minimum: unique, hence schedule-free.
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (values[i] < values[best]) best = i;
    if (n == 0) return {0.0, static_cast<std::size_t>(-1)};
    return {values[best], best};
}

}  // namespace ckm
