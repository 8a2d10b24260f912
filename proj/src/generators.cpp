#include "ckm/generators.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "ckm/errors.hpp"
#include "ckm/rng.hpp"

namespace ckm {

Instance gen_random_instance(const RandomInstanceParams& p, std::uint64_t seed,
                             std::vector<GraphEdge>* edges_out) {
    if (p.n_facilities < 1 || p.n_clients < 0 || p.k < 1 || p.k > p.n_facilities)
        throw std::invalid_argument("gen_random_instance: bad counts");
    if (p.cap_min < 0 || p.cap_max < p.cap_min)
        throw std::invalid_argument("gen_random_instance: bad capacity range");
    if (p.weight_min < 1 || p.weight_max < p.weight_min)
        throw std::invalid_argument("gen_random_instance: bad weight range");

    SplitMix64 rng(seed);
    const int n = p.n_facilities + p.n_clients;

    // Random spanning tree (random parent among earlier points) plus some
    // extra edges; the shortest-path closure guarantees a metric.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    std::vector<GraphEdge> edges;
    for (int i = 1; i < n; ++i) {
        int j = static_cast<int>(rng.next_below(i));
        edges.push_back({order[i], order[j],
                         static_cast<double>(rng.next_int(p.weight_min, p.weight_max))});
    }
    const int extra = n / 2;
    for (int e = 0; e < extra && n >= 2; ++e) {
        int u = static_cast<int>(rng.next_below(n));
        int v = static_cast<int>(rng.next_below(n));
        if (u == v) continue;
        edges.push_back({u, v, static_cast<double>(rng.next_int(p.weight_min, p.weight_max))});
    }

    Instance inst;
    inst.metric = n == 1 ? Metric(1) : metric_from_weighted_graph(edges, n);
    if (edges_out) *edges_out = edges;
    inst.k = p.k;
    inst.facilities.resize(p.n_facilities);
    std::iota(inst.facilities.begin(), inst.facilities.end(), 0);
    inst.clients.resize(p.n_clients);
    std::iota(inst.clients.begin(), inst.clients.end(), p.n_facilities);

    // Capacities: resample until the k largest can host every client.
    const long long best_possible = static_cast<long long>(p.k) * p.cap_max;
    if (best_possible < p.n_clients)
        throw std::invalid_argument(
            "gen_random_instance: capacity range cannot produce a feasible instance");
    for (int attempt = 0; attempt < 1000; ++attempt) {
        inst.capacities.clear();
        for (int i = 0; i < p.n_facilities; ++i)
            inst.capacities.push_back(rng.next_int(p.cap_min, p.cap_max));
        std::vector<int> sorted = inst.capacities;
        std::sort(sorted.begin(), sorted.end(), std::greater<int>());
        long long top = 0;
        for (int i = 0; i < p.k; ++i) top += sorted[i];
        if (top >= p.n_clients) return inst;
    }
    throw std::runtime_error("gen_random_instance: could not sample feasible capacities");
}

DominatingSetReduction gen_dominating_set_reduction(const UnweightedGraph& g, int k) {
    if (g.n < 1) throw std::invalid_argument("dominating-set reduction: empty graph");
    if (k < 1 || k > g.n) throw std::invalid_argument("dominating-set reduction: k out of range");

    // Every vertex appears twice: facility copy i and client copy n+i at
    // distance zero, so facilities and clients partition the point set while
    // both see the graph's shortest-path metric.
    std::vector<GraphEdge> edges;
    for (auto [u, v] : g.edges) {
        if (u < 0 || u >= g.n || v < 0 || v >= g.n)
            throw std::invalid_argument("dominating-set reduction: edge endpoint out of range");
        edges.push_back({u, v, 1.0});
    }
    for (int i = 0; i < g.n; ++i) edges.push_back({i, g.n + i, 0.0});

    DominatingSetReduction red;
    try {
        red.instance.metric = metric_from_weighted_graph(edges, 2 * g.n);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("dominating-set reduction: ") + e.what());
    }
    red.instance.k = k;
    red.instance.facilities.resize(g.n);
    std::iota(red.instance.facilities.begin(), red.instance.facilities.end(), 0);
    red.instance.capacities.assign(g.n, g.n);  // effectively uncapacitated
    red.instance.clients.resize(g.n);
    std::iota(red.instance.clients.begin(), red.instance.clients.end(), g.n);
    red.target_cost = g.n - k;
    return red;
}

bool has_dominating_set(const UnweightedGraph& g, int k) {
    if (g.n > 16) throw RefusedScaleError("has_dominating_set: guard is 16 vertices");
    std::vector<unsigned> closed(g.n, 0);
    for (int i = 0; i < g.n; ++i) closed[i] = 1u << i;
    for (auto [u, v] : g.edges) {
        closed[u] |= 1u << v;
        closed[v] |= 1u << u;
    }
    const unsigned all = (g.n == 32) ? ~0u : ((1u << g.n) - 1);
    std::vector<int> pick;
    std::function<bool(int, unsigned, int)> rec = [&](int start, unsigned covered, int left) {
        if (covered == all) return true;
        if (left == 0) return false;
        for (int v = start; v < g.n; ++v)
            if (rec(v + 1, covered | closed[v], left - 1)) return true;
        return false;
    };
    return rec(0, 0u, k);
}

}  // namespace ckm
