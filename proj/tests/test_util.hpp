#ifndef CKM_TEST_UTIL_HPP
#define CKM_TEST_UTIL_HPP

#include <algorithm>
#include <limits>
#include <vector>

#include "ckm/centered.hpp"
#include "ckm/generators.hpp"
#include "ckm/instance.hpp"
#include "ckm/rng.hpp"
#include "ckm/transport.hpp"
#include "ckm/tree.hpp"
#include "ckm/uncap.hpp"

namespace ckm::test {

// Independent oracle for the transportation problem: enumerate every
// capacity-respecting assignment, pruning branches that cannot cover the
// remaining clients.
inline double brute_force_transport(const TransportProblem& p) {
    const int nc = static_cast<int>(p.clients.size());
    const int nf = static_cast<int>(p.facilities.size());
    std::vector<int> load(nf, 0);
    std::vector<long long> cap_suffix(nc + 1, 0);
    long long total_cap = 0;
    for (int cap : p.capacities) total_cap += cap;

    double best = std::numeric_limits<double>::infinity();
    std::vector<int> choice(nc, -1);
    auto rec = [&](auto&& self, int c, double cost, long long used) -> void {
        if (cost >= best) return;
        if (c == nc) {
            best = cost;
            return;
        }
        if (total_cap - used < nc - c) return;  // cannot serve the rest
        for (int f = 0; f < nf; ++f) {
            if (load[f] >= p.capacities[f]) continue;
            ++load[f];
            self(self, c + 1, cost + p.cost_at(c, f), used + 1);
            --load[f];
        }
    };
    rec(rec, 0, 0.0, 0);
    return best;
}

inline TransportProblem random_transport_problem(SplitMix64& rng, int max_f, int max_c,
                                                 bool integer_costs) {
    TransportProblem p;
    const int nf = rng.next_int(1, max_f);
    const int nc = rng.next_int(1, max_c);
    for (int f = 0; f < nf; ++f) p.facilities.push_back(f);
    for (int c = 0; c < nc; ++c) p.clients.push_back(nf + c);
    // Capacities feasible by construction but often tight.
    long long total = 0;
    for (int f = 0; f < nf; ++f) {
        int cap = rng.next_int(0, std::max(1, nc));
        p.capacities.push_back(cap);
        total += cap;
    }
    int at = 0;
    while (total < nc) {  // top up round-robin so Σ u_f >= |C|
        ++p.capacities[at % nf];
        ++at;
        ++total;
    }
    p.cost.resize(static_cast<std::size_t>(nc) * nf);
    for (auto& v : p.cost)
        v = integer_costs ? static_cast<double>(rng.next_int(0, 100)) : rng.next_double() * 100.0;
    return p;
}

inline Instance small_random_instance(SplitMix64& rng, int max_f, int max_c, int max_k,
                                      int cap_max) {
    RandomInstanceParams params;
    params.n_facilities = rng.next_int(1, max_f);
    params.n_clients = rng.next_int(1, max_c);
    params.k = rng.next_int(1, std::min(max_k, params.n_facilities));
    params.cap_min = 0;
    params.cap_max = cap_max;
    // Keep the range feasible for the sampler.
    while (static_cast<long long>(params.k) * params.cap_max < params.n_clients)
        ++params.cap_max;
    return gen_random_instance(params, rng.split());
}

// A centered instance seeded by a random open set of at most max_centers
// facilities (any nearest-assignment solution is a valid seed).
struct CenteredFixture {
    Instance instance;
    UncapSolution uncap;
    CenteredInstance centered;
};

inline CenteredFixture random_centered(SplitMix64& rng, int max_f, int max_c, int max_k,
                                       int max_centers, int cap_max) {
    CenteredFixture fx;
    fx.instance = small_random_instance(rng, max_f, max_c, max_k, cap_max);
    const int nf = fx.instance.n_facilities();
    const int n_open = rng.next_int(1, std::min(max_centers, nf));
    std::vector<PointId> pool = fx.instance.facilities;
    rng.shuffle(pool);
    pool.resize(n_open);
    fx.uncap = nearest_assignment(fx.instance, pool);
    fx.centered = build_centered(fx.instance, fx.uncap);
    return fx;
}

// Random client -> facility map (not necessarily capacity-feasible); the
// reduction inequalities hold for any such map.
inline Assignment random_any_assignment(SplitMix64& rng, const Instance& inst) {
    Assignment a;
    a.clients = inst.clients;
    for (std::size_t i = 0; i < inst.clients.size(); ++i) {
        PointId f = inst.facilities[rng.next_below(inst.facilities.size())];
        a.phi.push_back(f);
    }
    a.open = a.phi;
    std::sort(a.open.begin(), a.open.end());
    a.open.erase(std::unique(a.open.begin(), a.open.end()), a.open.end());
    return a;
}

// Random capacity-feasible assignment with at most k open facilities, or an
// empty optional-like flag when the sampled subset cannot host the clients.
inline bool random_feasible_assignment(SplitMix64& rng, const Instance& inst, Assignment* out) {
    const int nf = inst.n_facilities();
    std::vector<int> order(nf);
    for (int i = 0; i < nf; ++i) order[i] = i;
    rng.shuffle(order);
    const int open_n = rng.next_int(1, std::min(inst.k, nf));
    std::vector<int> chosen(order.begin(), order.begin() + open_n);
    long long cap = 0;
    for (int pos : chosen) cap += inst.capacities[pos];
    if (cap < inst.n_clients()) return false;

    out->clients = inst.clients;
    out->phi.clear();
    out->open.clear();
    for (int pos : chosen) out->open.push_back(inst.facilities[pos]);
    std::sort(out->open.begin(), out->open.end());
    std::vector<int> left;
    for (int pos : chosen) left.push_back(inst.capacities[pos]);
    for (std::size_t i = 0; i < inst.clients.size(); ++i) {
        int pick;
        do {
            pick = static_cast<int>(rng.next_below(chosen.size()));
        } while (left[pick] == 0);
        --left[pick];
        out->phi.push_back(inst.facilities[chosen[pick]]);
    }
    return true;
}

// Random rooted binary tree instance with integer edge lengths, clients and
// facilities at the leaves.
inline TreeInstance random_tree_instance(SplitMix64& rng, int n_leaves, int k, int cap_max) {
    TreeInstance t;
    t.k = k;
    // Grow a binary tree by splitting random leaves until n_leaves exist.
    t.parent = {-1};
    t.edge_len = {0.0};
    std::vector<int> open_leaves = {0};
    while (static_cast<int>(open_leaves.size()) < n_leaves) {
        int pick = static_cast<int>(rng.next_below(open_leaves.size()));
        int node = open_leaves[pick];
        open_leaves.erase(open_leaves.begin() + pick);
        for (int side = 0; side < 2; ++side) {
            open_leaves.push_back(static_cast<int>(t.parent.size()));
            t.parent.push_back(node);
            t.edge_len.push_back(static_cast<double>(rng.next_int(0, 9)));
        }
    }
    std::sort(open_leaves.begin(), open_leaves.end());
    t.leaf_kind.assign(t.parent.size(), TreeInstance::Leaf::none);
    t.leaf_point.assign(t.parent.size(), -1);
    t.leaf_capacity.assign(t.parent.size(), 0);

    // Roles: ensure at least one facility; point ids are assigned facilities
    // first, then clients, to mirror the file layout.
    std::vector<int> facility_leaves, client_leaves;
    for (int leaf : open_leaves) {
        if (facility_leaves.empty() || rng.next_below(2) == 0)
            facility_leaves.push_back(leaf);
        else
            client_leaves.push_back(leaf);
    }
    int next_id = 0;
    for (int leaf : facility_leaves) {
        t.leaf_kind[leaf] = TreeInstance::Leaf::facility;
        t.leaf_point[leaf] = next_id++;
        t.leaf_capacity[leaf] = rng.next_int(0, cap_max);
    }
    for (int leaf : client_leaves) {
        t.leaf_kind[leaf] = TreeInstance::Leaf::client;
        t.leaf_point[leaf] = next_id++;
    }
    t.n_clients = static_cast<int>(client_leaves.size());
    t.base_size = next_id;
    t.k = std::min(k, static_cast<int>(facility_leaves.size()));
    t.rebuild_children();
    return t;
}

// True when the k largest capacities cover the clients.
inline bool feasible(const Instance& inst) {
    std::vector<int> caps = inst.capacities;
    std::sort(caps.begin(), caps.end(), std::greater<int>());
    long long top = 0;
    for (int i = 0; i < std::min<int>(inst.k, static_cast<int>(caps.size())); ++i) top += caps[i];
    return top >= inst.n_clients();
}

}  // namespace ckm::test

#endif  // CKM_TEST_UTIL_HPP
