#ifndef CKM_GENERATORS_HPP
#define CKM_GENERATORS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "ckm/instance.hpp"

namespace ckm {

struct RandomInstanceParams {
    int n_facilities = 4;
    int n_clients = 6;
    int k = 2;
    int cap_min = 1;
    int cap_max = 4;
    int weight_min = 1;  // integer edge weights keep generated metrics integral
    int weight_max = 9;
};

// Random shortest-path metric over a random connected weighted graph
// (spanning tree plus extra edges), capacities resampled until the k
// largest cover the clients. Deterministic per seed, byte-identical files
// on rerun. When edges_out is given it receives the generating graph, so
// large instances can be written in the compact graph form.
Instance gen_random_instance(const RandomInstanceParams& params, std::uint64_t seed,
                             std::vector<GraphEdge>* edges_out = nullptr);

// Unweighted connected graph for the dominating-set reduction.
struct UnweightedGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;
};

struct DominatingSetReduction {
    Instance instance;       // every vertex is both a facility (capacity |V|) and a client
    long long target_cost;   // |V| - k
    // The reduction predicate: G has a dominating set of size <= k iff the
    // uncapacitated k-median optimum equals target_cost.
};

DominatingSetReduction gen_dominating_set_reduction(const UnweightedGraph& g, int k);

// Exhaustive dominating-set search, for verifying the reduction on small
// graphs (guard: n <= 16).
bool has_dominating_set(const UnweightedGraph& g, int k);

}  // namespace ckm

#endif  // CKM_GENERATORS_HPP
