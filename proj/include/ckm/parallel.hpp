#ifndef CKM_PARALLEL_HPP
#define CKM_PARALLEL_HPP

#include <cstddef>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

namespace ckm {

// Worker count for parallel regions. Reads CKM_THREADS on every call
// (0 or unset = hardware concurrency), so tests can flip it between runs.
int worker_count();

// Runs fn(i) for i in [0, n) on worker threads, static contiguous chunks.
// fn must be safe to call concurrently for distinct i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// Minimum of (score(i), i) over [0, n), compared lexicographically.
// The pair ordering makes the result independent of scheduling.
std::pair<double, std::size_t> parallel_min_index(
    std::size_t n, const std::function<double(std::size_t)>& score);

}  // namespace ckm

#endif  // CKM_PARALLEL_HPP
