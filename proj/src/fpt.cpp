#include "ckm/fpt.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ckm/errors.hpp"
#include "ckm/parallel.hpp"
#include "ckm/transport.hpp"
#include "ckm/uncap.hpp"

namespace ckm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kConfigBlock = 512;

long long top_k_capacity(const std::vector<int>& caps, int k) {
    std::vector<int> sorted = caps;
    std::sort(sorted.begin(), sorted.end(), std::greater<int>());
    long long total = 0;
    for (int i = 0; i < std::min<int>(k, static_cast<int>(sorted.size())); ++i) total += sorted[i];
    return total;
}

// Streams configurations in blocks and evaluates them in parallel; keeps
// the (cost, rank) lexicographic minimum, so the result is independent of
// the worker count.
struct BestConfig {
    double cost = kInf;
    long long rank = -1;
    Configuration config;
};

BestConfig best_configuration(const std::vector<int>& pools, int k,
                              const std::function<double(const Configuration&)>& eval,
                              long long* tried) {
    BestConfig best;
    std::vector<Configuration> block;
    block.reserve(kConfigBlock);
    long long base_rank = 0;

    auto flush = [&] {
        if (block.empty()) return;
        std::vector<double> costs(block.size());
        parallel_for(block.size(), [&](std::size_t i) { costs[i] = eval(block[i]); });
        for (std::size_t i = 0; i < block.size(); ++i)
            if (costs[i] < best.cost) {
                best.cost = costs[i];
                best.rank = base_rank + static_cast<long long>(i);
                best.config = block[i];
            }
        base_rank += static_cast<long long>(block.size());
        block.clear();
    };

    *tried += enumerate_configurations(pools, k, [&](const Configuration& c) {
        block.push_back(c);
        if (block.size() >= kConfigBlock) flush();
    });
    flush();
    return best;
}

}  // namespace

long long enumerate_configurations(const std::vector<int>& pools, int k,
                                   const std::function<void(const Configuration&)>& fn) {
    if (k < 0) throw std::invalid_argument("enumerate_configurations: k must be nonnegative");
    const int m = static_cast<int>(pools.size());
    for (int p : pools)
        if (p < 0) throw std::invalid_argument("enumerate_configurations: negative pool size");
    std::vector<long long> suffix(m + 1, 0);
    for (int i = m - 1; i >= 0; --i) suffix[i] = suffix[i + 1] + pools[i];
    if (k > suffix[0]) return 0;

    Configuration counts(m, 0);
    long long yielded = 0;
    // Depth-first with both bounds tightened: position i takes only counts
    // that the suffix pools can still complete, so every visited leaf is a
    // valid configuration.
    std::function<void(int, int)> rec = [&](int i, int rem) {
        if (i == m) {
            fn(counts);
            ++yielded;
            return;
        }
        const int lo = static_cast<int>(std::max<long long>(0, rem - suffix[i + 1]));
        const int hi = static_cast<int>(std::min<long long>(rem, pools[i]));
        for (int c = lo; c <= hi; ++c) {
            counts[i] = c;
            rec(i + 1, rem - c);
        }
        counts[i] = 0;
    };
    rec(0, k);
    return yielded;
}

FptResult solve_uniform_centered(const CenteredInstance& centered, int uniform_capacity, int k) {
    const Instance inst = centered.as_instance();
    for (int cap : inst.capacities)
        if (cap != uniform_capacity)
            throw std::invalid_argument("solve_uniform_centered: capacities are not uniform");
    if (k < 1 || k > inst.n_facilities())
        throw std::invalid_argument("solve_uniform_centered: k out of range");

    const int nc = inst.n_clients();
    if (static_cast<long long>(k) * uniform_capacity < nc) {
        std::ostringstream msg;
        msg << "uniform solve infeasible: k*u = " << static_cast<long long>(k) * uniform_capacity
            << " < " << nc << " clients";
        throw InfeasibleError(msg.str(), nc - static_cast<long long>(k) * uniform_capacity);
    }

    // Within a cluster only the distance to the center matters, so each
    // cluster is pre-sorted by (pendant length, facility id) and a
    // configuration opens a prefix.
    const int ns = centered.n_centers();
    std::vector<std::vector<PointId>> sorted_clusters(ns);
    for (int j = 0; j < ns; ++j) {
        sorted_clusters[j] = centered.f_cluster[j];
        std::sort(sorted_clusters[j].begin(), sorted_clusters[j].end(),
                  [&](PointId a, PointId b) {
                      double da = centered.pendant(a), db = centered.pendant(b);
                      return da < db || (da == db && a < b);
                  });
    }
    std::vector<int> pools(ns);
    for (int j = 0; j < ns; ++j) pools[j] = static_cast<int>(sorted_clusters[j].size());

    auto open_set = [&](const Configuration& c) {
        std::vector<PointId> open;
        for (int j = 0; j < ns; ++j)
            for (int t = 0; t < c[j]; ++t) open.push_back(sorted_clusters[j][t]);
        return open;
    };
    auto eval = [&](const Configuration& c) -> double {
        std::vector<PointId> open = open_set(c);
        std::vector<int> caps(open.size(), uniform_capacity);
        TransportProblem tp = TransportProblem::from_metric(inst.metric, open, caps, inst.clients);
        return optimal_mapping(tp).cost;
    };

    FptResult result;
    BestConfig best = best_configuration(pools, k, eval, &result.configurations_tried);
    result.d_candidates_tried = 0;
    if (best.rank < 0)
        throw InfeasibleError("uniform solve infeasible: no feasible configuration", 0);

    std::vector<PointId> open = open_set(best.config);
    std::vector<int> caps(open.size(), uniform_capacity);
    TransportResult tr =
        optimal_mapping(TransportProblem::from_metric(inst.metric, open, caps, inst.clients));
    result.assignment = tr.assignment;
    result.cost = tr.cost;
    return result;
}

namespace {

// Occupied (center, bucket) pools of a bucketed instance, each sorted by
// (capacity desc, facility id asc) so a configuration opens a prefix.
struct BucketPools {
    std::vector<std::vector<PointId>> members;
    std::vector<int> sizes;
};

BucketPools bucket_pools(const CenteredInstance& centered, const BucketedInstance& b) {
    const int ns = centered.n_centers();
    const auto& facilities = centered.base.facilities;
    std::vector<std::vector<std::vector<PointId>>> grid(
        ns, std::vector<std::vector<PointId>>(b.n_buckets));
    for (std::size_t pos = 0; pos < facilities.size(); ++pos) {
        if (b.bucket_of[pos] < 0) continue;
        const PointId f = facilities[pos];
        grid[centered.center_index(centered.center_of[f])][b.bucket_of[pos]].push_back(f);
    }
    BucketPools pools;
    for (int j = 0; j < ns; ++j)
        for (int i = 0; i < b.n_buckets; ++i) {
            if (grid[j][i].empty()) continue;
            auto& members = grid[j][i];
            std::sort(members.begin(), members.end(), [&](PointId a, PointId b2) {
                int ca = centered.base.capacity_of(a), cb = centered.base.capacity_of(b2);
                return ca > cb || (ca == cb && a < b2);
            });
            pools.sizes.push_back(static_cast<int>(members.size()));
            pools.members.push_back(std::move(members));
        }
    return pools;
}

}  // namespace

FptResult solve_nonuniform_centered(const CenteredInstance& centered, int k, double epsilon) {
    if (epsilon <= 0)
        throw std::invalid_argument("solve_nonuniform_centered: epsilon must be positive");
    const Instance inst = centered.as_instance();
    if (k < 1 || k > inst.n_facilities())
        throw std::invalid_argument("solve_nonuniform_centered: k out of range");
    const int nc = inst.n_clients();

    FptResult result;
    if (nc == 0) {
        result.assignment.clients = inst.clients;
        return result;  // nothing to serve, nothing to open
    }

    // The approximation argument spends epsilon twice (multiplicative and
    // additive rounding), so the buckets are built with epsilon/3.
    const double eps_internal = epsilon / 3.0;
    const std::vector<double> candidates = candidate_D_values(centered);

    double best_cost = kInf;
    long long best_d_rank = -1;
    double best_D = 0.0;
    Configuration best_config;

    for (std::size_t d_rank = 0; d_rank < candidates.size(); ++d_rank) {
        const double D = candidates[d_rank];
        ++result.d_candidates_tried;
        BucketedInstance bucketed = build_buckets(centered, D, eps_internal);

        std::vector<int> surviving_caps;
        surviving_caps.reserve(bucketed.surviving.size());
        for (PointId f : bucketed.surviving) surviving_caps.push_back(inst.capacity_of(f));
        if (top_k_capacity(surviving_caps, k) < nc) continue;  // D cannot host a solution

        BucketPools pools = bucket_pools(centered, bucketed);
        auto open_set = [&](const Configuration& c) {
            std::vector<PointId> open;
            for (std::size_t j = 0; j < pools.members.size(); ++j)
                for (int t = 0; t < c[j]; ++t) open.push_back(pools.members[j][t]);
            return open;
        };
        auto eval = [&](const Configuration& c) -> double {
            std::vector<PointId> open = open_set(c);
            std::vector<int> caps;
            caps.reserve(open.size());
            long long total_cap = 0;
            for (PointId f : open) {
                caps.push_back(inst.capacity_of(f));
                total_cap += caps.back();
            }
            if (total_cap < nc) return kInf;
            TransportProblem tp =
                TransportProblem::from_metric(bucketed.d_prime, open, caps, inst.clients);
            Assignment a = optimal_mapping(tp).assignment;
            // Optimal under d_prime, reported under d_ell.
            return assignment_cost(a, centered.d_ell);
        };

        BestConfig best = best_configuration(pools.sizes, k, eval, &result.configurations_tried);
        if (best.rank >= 0 && best.cost < best_cost) {
            best_cost = best.cost;
            best_d_rank = static_cast<long long>(d_rank);
            best_D = D;
            best_config = best.config;
        }
    }

    if (best_d_rank < 0)
        throw InfeasibleError("non-uniform solve infeasible: no (D, configuration) is feasible",
                              0);

    BucketedInstance bucketed = build_buckets(centered, best_D, eps_internal);
    BucketPools pools = bucket_pools(centered, bucketed);
    std::vector<PointId> open;
    for (std::size_t j = 0; j < pools.members.size(); ++j)
        for (int t = 0; t < best_config[j]; ++t) open.push_back(pools.members[j][t]);
    std::vector<int> caps;
    for (PointId f : open) caps.push_back(inst.capacity_of(f));
    TransportResult tr =
        optimal_mapping(TransportProblem::from_metric(bucketed.d_prime, open, caps, inst.clients));
    result.assignment = tr.assignment;
    result.cost = assignment_cost(tr.assignment, centered.d_ell);
    return result;
}

namespace {

CkmPipelineResult run_pipeline(const Instance& inst, int k, double epsilon, bool uniform) {
    if (epsilon <= 0) throw std::invalid_argument("solve_ckm: epsilon must be positive");
    if (k < 1 || k > inst.n_facilities()) throw std::invalid_argument("solve_ckm: k out of range");
    const int nc = inst.n_clients();
    long long coverable = top_k_capacity(inst.capacities, k);
    if (coverable < nc) {
        std::ostringstream msg;
        msg << "instance infeasible: best k capacities cover " << coverable << " of " << nc
            << " clients";
        throw InfeasibleError(msg.str(), nc - coverable);
    }

    const double eps_sub = epsilon / 3.0;
    UncapSolution uncap = bicriteria_greedy(inst, k, eps_sub);
    CenteredInstance centered = build_centered(inst, uncap);

    FptResult stage;
    if (uniform) {
        stage = solve_uniform_centered(centered, inst.capacities.front(), k);
    } else {
        stage = solve_nonuniform_centered(centered, k, eps_sub);
    }

    CkmPipelineResult result;
    result.assignment = stage.assignment;
    result.cost = assignment_cost(stage.assignment, inst.metric);  // pullback, never more
    result.cost_d_ell = stage.cost;
    result.uncap_cost = uncap.cost;
    result.ell_used = centered.n_centers();
    result.configurations_tried = stage.configurations_tried;
    result.d_candidates_tried = stage.d_candidates_tried;
    return result;
}

}  // namespace

CkmPipelineResult solve_ckm(const Instance& inst, int k, double epsilon) {
    return run_pipeline(inst, k, epsilon, /*uniform=*/false);
}

CkmPipelineResult solve_ckm_uniform(const Instance& inst, int k, double epsilon) {
    for (int cap : inst.capacities)
        if (cap != inst.capacities.front())
            throw std::invalid_argument("solve_ckm_uniform: capacities are not uniform");
    return run_pipeline(inst, k, epsilon, /*uniform=*/true);
}

}  // namespace ckm
