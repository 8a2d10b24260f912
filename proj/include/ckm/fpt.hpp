#ifndef CKM_FPT_HPP
#define CKM_FPT_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "ckm/centered.hpp"
#include "ckm/instance.hpp"

namespace ckm {

// One facility-count vector: counts[i] facilities opened from pool i,
// Σ counts = k. Pools are per center (uniform case) or per occupied
// (center, bucket) pair (non-uniform case).
using Configuration = std::vector<int>;

// Streams every counts vector with Σ = k and counts[i] <= pools[i], each
// exactly once, in a fixed lexicographic order. Returns the number yielded
// (the bounded-composition count). No list is materialized.
long long enumerate_configurations(const std::vector<int>& pools, int k,
                                   const std::function<void(const Configuration&)>& fn);

struct FptResult {
    Assignment assignment;
    double cost = 0.0;  // under the metric named by the operation's contract
    long long configurations_tried = 0;
    int d_candidates_tried = 0;
};

// Exact Uniform CKM on a centered instance: scans all per-cluster count
// configurations, opening in each cluster the counts nearest-to-center
// facilities, and keeps the cheapest transportation solution under d_ell.
// Throws InfeasibleError when no configuration is feasible.
FptResult solve_uniform_centered(const CenteredInstance& centered, int uniform_capacity, int k);

// (1+epsilon)-approximate Non-Uniform CKM on a centered instance: guesses
// the largest used distance D, rounds pendants into buckets, opens the
// largest-capacity facilities per (center, bucket) count, and solves
// transportation under d_prime. Runs internally with epsilon/3; the
// reported cost is re-evaluated under d_ell.
FptResult solve_nonuniform_centered(const CenteredInstance& centered, int k, double epsilon);

struct CkmPipelineResult {
    Assignment assignment;
    double cost = 0.0;       // under the original metric d
    double cost_d_ell = 0.0; // the same assignment under d_ell
    double uncap_cost = 0.0;
    int ell_used = 0;
    long long configurations_tried = 0;
    int d_candidates_tried = 0;
};

// End-to-end (7+epsilon) pipeline: bicriteria greedy → centered instance →
// bucketed enumeration → pull the best assignment back to the original
// metric. The output is capacity-feasible with at most k open facilities.
CkmPipelineResult solve_ckm(const Instance& inst, int k, double epsilon);

// Same pipeline with the exact uniform-capacity stage instead of the
// bucketed one. Requires all capacities equal.
CkmPipelineResult solve_ckm_uniform(const Instance& inst, int k, double epsilon);

}  // namespace ckm

#endif  // CKM_FPT_HPP
