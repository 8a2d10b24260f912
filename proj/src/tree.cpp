#include "ckm/tree.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ckm/errors.hpp"
#include "ckm/parallel.hpp"
#include "ckm/rng.hpp"
#include "ckm/transport.hpp"
#include "ckm/uncap.hpp"

namespace ckm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> all_pairs_tree_dist(const std::vector<int>& parent,
                                        const std::vector<double>& edge_len,
                                        const std::vector<int>& leaves) {
    const int m = static_cast<int>(leaves.size());
    const int n_nodes = static_cast<int>(parent.size());
    std::vector<int> depth(n_nodes, 0);
    std::vector<double> up(n_nodes, 0.0);  // distance to root
    for (int v = 0; v < n_nodes; ++v)
        if (parent[v] >= 0) {
            depth[v] = depth[parent[v]] + 1;  // parents precede children by construction
            up[v] = up[parent[v]] + edge_len[v];
        }
    std::vector<double> dist(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            int a = leaves[i], b = leaves[j];
            while (depth[a] > depth[b]) a = parent[a];
            while (depth[b] > depth[a]) b = parent[b];
            while (a != b) {
                a = parent[a];
                b = parent[b];
            }
            double w = up[leaves[i]] + up[leaves[j]] - 2.0 * up[a];
            dist[static_cast<std::size_t>(i) * m + j] = w;
            dist[static_cast<std::size_t>(j) * m + i] = w;
        }
    return dist;
}

}  // namespace

TreeEmbedding sample_frt(const Metric& center_metric, std::uint64_t seed) {
    const int m = center_metric.size();
    if (m < 1) throw std::invalid_argument("sample_frt: empty center set");

    TreeEmbedding emb;
    emb.seed = seed;
    if (m == 1) {
        emb.parent = {-1};
        emb.edge_len = {0.0};
        emb.leaf_of = {0};
        emb.tree_dist = {0.0};
        return emb;
    }

    double min_nz = kInf, diam = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            double w = center_metric(i, j);
            diam = std::max(diam, w);
            if (w > 0.0) min_nz = std::min(min_nz, w);
        }

    emb.parent.push_back(-1);  // root is node 0
    emb.edge_len.push_back(0.0);
    emb.leaf_of.assign(m, -1);

    if (diam == 0.0) {
        // All centers coincide; hang every leaf off the root at length 0.
        for (int i = 0; i < m; ++i) {
            emb.leaf_of[i] = static_cast<int>(emb.parent.size());
            emb.parent.push_back(0);
            emb.edge_len.push_back(0.0);
        }
    } else {
        emb.scale = min_nz;  // normalize so the minimum nonzero distance is 1
        auto ds = [&](int a, int b) { return center_metric(a, b) / min_nz; };
        const double delta = diam / min_nz;

        SplitMix64 rng(seed);
        const double beta = std::exp2(rng.next_double());  // log-uniform in [1,2)
        std::vector<int> perm(m);
        std::iota(perm.begin(), perm.end(), 0);
        rng.shuffle(perm);

        int top = 0;
        while (std::exp2(top) < delta) ++top;

        // Ball carving: a level-i cluster is split by radius beta*2^(i-1)
        // balls around the permutation order; the edge to each child has
        // length beta*2^i, twice the child radius, which makes d_T dominate
        // the input on every sample.
        std::function<void(std::vector<int>&, int, int)> carve = [&](std::vector<int>& pts,
                                                                     int level, int node) {
            if (pts.size() == 1) {
                emb.leaf_of[pts[0]] = node;
                return;
            }
            double local_diam = 0.0;
            for (std::size_t i = 0; i < pts.size(); ++i)
                for (std::size_t j = i + 1; j < pts.size(); ++j)
                    local_diam = std::max(local_diam, ds(pts[i], pts[j]));
            if (local_diam == 0.0) {
                for (int p : pts) {
                    emb.leaf_of[p] = static_cast<int>(emb.parent.size());
                    emb.parent.push_back(node);
                    emb.edge_len.push_back(0.0);
                }
                return;
            }
            const double radius = beta * std::exp2(level - 1);
            const double child_edge = beta * std::exp2(level) * min_nz;
            std::vector<char> taken(pts.size(), 0);
            std::size_t left = pts.size();
            for (int u : perm) {
                if (left == 0) break;
                std::vector<int> child;
                for (std::size_t i = 0; i < pts.size(); ++i)
                    if (!taken[i] && ds(pts[i], u) <= radius) {
                        taken[i] = 1;
                        child.push_back(pts[i]);
                        --left;
                    }
                if (child.empty()) continue;
                if (child.size() == pts.size()) {
                    // One ball swallowed the cluster; descend in place so the
                    // next level's smaller radius can split it.
                    carve(child, level - 1, node);
                    return;
                }
                int child_node = static_cast<int>(emb.parent.size());
                emb.parent.push_back(node);
                emb.edge_len.push_back(child_edge);
                carve(child, level - 1, child_node);
            }
        };

        std::vector<int> all(m);
        std::iota(all.begin(), all.end(), 0);
        carve(all, top, 0);
    }

    emb.tree_dist = all_pairs_tree_dist(emb.parent, emb.edge_len, emb.leaf_of);
    return emb;
}

TreeInstance build_tree_instance(const CenteredInstance& centered, const TreeEmbedding& emb) {
    if (static_cast<int>(emb.leaf_of.size()) != centered.n_centers())
        throw std::invalid_argument("build_tree_instance: embedding/center count mismatch");

    TreeInstance t;
    t.k = centered.base.k;
    t.n_clients = centered.base.n_clients();
    t.base_size = centered.base_size();

    t.parent = emb.parent;
    t.edge_len = emb.edge_len;
    t.leaf_kind.assign(t.parent.size(), TreeInstance::Leaf::none);
    t.leaf_point.assign(t.parent.size(), -1);
    t.leaf_capacity.assign(t.parent.size(), 0);

    auto attach = [&](int under, double len, TreeInstance::Leaf kind, PointId p, int cap) {
        t.parent.push_back(under);
        t.edge_len.push_back(len);
        t.leaf_kind.push_back(kind);
        t.leaf_point.push_back(p);
        t.leaf_capacity.push_back(cap);
    };
    for (std::size_t i = 0; i < centered.base.facilities.size(); ++i) {
        PointId f = centered.base.facilities[i];
        int center = centered.center_index(centered.center_of[f]);
        attach(emb.leaf_of[center], centered.pendant(f), TreeInstance::Leaf::facility, f,
               centered.base.capacities[i]);
    }
    for (PointId c : centered.base.clients) {
        int center = centered.center_index(centered.center_of[c]);
        attach(emb.leaf_of[center], centered.pendant(c), TreeInstance::Leaf::client, c, 0);
    }

    // Rebalance to at most two children per node with zero-length dummies.
    std::vector<std::vector<int>> children(t.parent.size());
    for (std::size_t v = 1; v < t.parent.size(); ++v) children[t.parent[v]].push_back(static_cast<int>(v));
    for (std::size_t v = 0; v < children.size(); ++v) {
        while (children[v].size() > 2) {
            int a = children[v][children[v].size() - 2];
            int b = children[v].back();
            children[v].pop_back();
            children[v].pop_back();
            int d = static_cast<int>(t.parent.size());
            t.parent.push_back(static_cast<int>(v));
            t.edge_len.push_back(0.0);
            t.leaf_kind.push_back(TreeInstance::Leaf::none);
            t.leaf_point.push_back(-1);
            t.leaf_capacity.push_back(0);
            children.push_back({a, b});
            children[v].push_back(d);
            t.parent[a] = d;
            t.parent[b] = d;
        }
    }
    t.rebuild_children();
    return t;
}

void TreeInstance::rebuild_children() {
    children.assign(parent.size(), {});
    for (std::size_t v = 0; v < parent.size(); ++v)
        if (parent[v] >= 0) children[parent[v]].push_back(static_cast<int>(v));
}

Metric TreeInstance::leaf_metric() const {
    std::vector<int> hosted;
    for (std::size_t v = 0; v < parent.size(); ++v)
        if (leaf_kind[v] != Leaf::none) hosted.push_back(static_cast<int>(v));

    // Parents do not necessarily precede children after rebalancing, so
    // compute depths by climbing.
    const int n_nodes = static_cast<int>(parent.size());
    std::vector<int> depth(n_nodes, -1);
    std::vector<double> up(n_nodes, 0.0);
    std::function<int(int)> depth_of = [&](int v) -> int {
        if (depth[v] >= 0) return depth[v];
        if (parent[v] < 0) return depth[v] = 0;
        depth_of(parent[v]);
        up[v] = up[parent[v]] + edge_len[v];
        return depth[v] = depth[parent[v]] + 1;
    };
    for (int v = 0; v < n_nodes; ++v) depth_of(v);

    Metric d(base_size);
    for (std::size_t i = 0; i < hosted.size(); ++i)
        for (std::size_t j = i + 1; j < hosted.size(); ++j) {
            int a = hosted[i], b = hosted[j];
            while (depth[a] > depth[b]) a = parent[a];
            while (depth[b] > depth[a]) b = parent[b];
            while (a != b) {
                a = parent[a];
                b = parent[b];
            }
            d.set(leaf_point[hosted[i]], leaf_point[hosted[j]],
                  up[hosted[i]] + up[hosted[j]] - 2.0 * up[a]);
        }
    return d;
}

Instance TreeInstance::as_instance() const {
    Instance inst;
    inst.metric = leaf_metric();
    inst.k = k;
    std::vector<std::pair<PointId, int>> fac;
    std::vector<PointId> cli;
    for (std::size_t v = 0; v < parent.size(); ++v) {
        if (leaf_kind[v] == Leaf::facility) fac.push_back({leaf_point[v], leaf_capacity[v]});
        if (leaf_kind[v] == Leaf::client) cli.push_back(leaf_point[v]);
    }
    std::sort(fac.begin(), fac.end());
    std::sort(cli.begin(), cli.end());
    for (auto& [p, cap] : fac) {
        inst.facilities.push_back(p);
        inst.capacities.push_back(cap);
    }
    inst.clients = cli;
    return inst;
}

DpTable compute_tree_dp_table(const TreeInstance& t) {
    const int n = t.n_clients;
    const int K = t.k;
    DpTable table;
    table.n_nodes = static_cast<int>(t.parent.size());
    table.max_k = K;
    table.balance_span = n;
    table.value.assign(static_cast<std::size_t>(table.n_nodes) * (K + 1) * (2 * n + 1), kInf);

    auto entry = [&](int node, int k, int b) -> double& {
        return table.value[(static_cast<std::size_t>(node) * (K + 1) + k) * (2 * n + 1) + (b + n)];
    };

    // Post-order over the rebalanced tree.
    std::vector<int> order;
    std::function<void(int)> visit = [&](int v) {
        for (int c : t.children[v]) visit(c);
        order.push_back(v);
    };
    visit(t.root());

    std::vector<double> merged;
    for (int v : order) {
        const double len = t.edge_len[v];
        if (t.children[v].empty()) {
            switch (t.leaf_kind[v]) {
                case TreeInstance::Leaf::client:
                    // The one client routes itself up through e_v.
                    if (n >= 1) entry(v, 0, -1) = len;
                    break;
                case TreeInstance::Leaf::facility: {
                    entry(v, 0, 0) = 0.0;
                    if (K >= 1) {
                        int cap = std::min(t.leaf_capacity[v], n);  // more than n is never routed
                        for (int b = 0; b <= cap; ++b) entry(v, 1, b) = len * b;
                    }
                    break;
                }
                case TreeInstance::Leaf::none:
                    entry(v, 0, 0) = 0.0;
                    break;
            }
            continue;
        }

        // Children already include their own edge costs; fold them, then
        // charge |b| crossings of e_v.
        merged.assign(static_cast<std::size_t>(K + 1) * (2 * n + 1), kInf);
        auto merged_at = [&](int k, int b) -> double& {
            return merged[static_cast<std::size_t>(k) * (2 * n + 1) + (b + n)];
        };
        const int c1 = t.children[v][0];
        if (t.children[v].size() == 1) {
            for (int k = 0; k <= K; ++k)
                for (int b = -n; b <= n; ++b) merged_at(k, b) = entry(c1, k, b);
        } else {
            const int c2 = t.children[v][1];
            for (int k1 = 0; k1 <= K; ++k1)
                for (int b1 = -n; b1 <= n; ++b1) {
                    const double left = entry(c1, k1, b1);
                    if (left == kInf) continue;
                    for (int k2 = 0; k1 + k2 <= K; ++k2)
                        for (int b2 = std::max(-n, -n - b1); b2 <= std::min(n, n - b1); ++b2) {
                            const double right = entry(c2, k2, b2);
                            if (right == kInf) continue;
                            double& slot = merged_at(k1 + k2, b1 + b2);
                            if (left + right < slot) slot = left + right;
                        }
                }
        }
        for (int k = 0; k <= K; ++k)
            for (int b = -n; b <= n; ++b) {
                const double inner = merged_at(k, b);
                if (inner < kInf) entry(v, k, b) = inner + len * std::abs(b);
            }
    }
    return table;
}

TreeDpResult solve_tree_dp(const TreeInstance& t) {
    const int n = t.n_clients;
    const int K = t.k;
    DpTable table = compute_tree_dp_table(t);

    int best_k = -1;
    double best = kInf;
    for (int k = 0; k <= K; ++k)
        if (table.at(t.root(), k, 0) < best) {
            best = table.at(t.root(), k, 0);
            best_k = k;
        }
    if (best_k < 0)
        throw InfeasibleError("tree dp infeasible: no opening of <= k facilities serves all clients",
                              0);

    // Backtrack the realizing open set. Split choices are re-derived from
    // the children's stored values, scanning in the same order as the fill.
    std::vector<PointId> open;
    std::function<void(int, int, int)> backtrack = [&](int v, int k, int b) {
        if (t.children[v].empty()) {
            if (t.leaf_kind[v] == TreeInstance::Leaf::facility && k == 1)
                open.push_back(t.leaf_point[v]);
            return;
        }
        const double target = table.at(v, k, b) - t.edge_len[v] * std::abs(b);
        const int c1 = t.children[v][0];
        if (t.children[v].size() == 1) {
            backtrack(c1, k, b);
            return;
        }
        const int c2 = t.children[v][1];
        for (int k1 = 0; k1 <= k; ++k1)
            for (int b1 = std::max(-n, b - n); b1 <= std::min(n, b + n); ++b1) {
                const double left = table.at(c1, k1, b1);
                if (left == kInf) continue;
                const double right = table.at(c2, k - k1, b - b1);
                if (right == kInf) continue;
                if (left + right <= target + 1e-9 * std::max(1.0, std::abs(target))) {
                    backtrack(c1, k1, b1);
                    backtrack(c2, k - k1, b - b1);
                    return;
                }
            }
        throw std::logic_error("tree dp backtrack: no split reproduces the table entry");
    };
    backtrack(t.root(), best_k, 0);
    std::sort(open.begin(), open.end());

    TreeDpResult result;
    result.k_opened = best_k;
    result.cost = best;
    if (n == 0) {
        result.assignment.open = open;
        return result;
    }

    // One transportation solve turns the flow balances into an explicit
    // client -> facility map; its optimum equals the DP value.
    Instance inst = t.as_instance();
    std::vector<int> caps;
    for (PointId f : open) caps.push_back(inst.capacity_of(f));
    TransportResult tr =
        optimal_mapping(TransportProblem::from_metric(inst.metric, open, caps, inst.clients));
    if (std::abs(tr.cost - best) > 1e-6 * std::max(1.0, std::abs(best)))
        throw std::logic_error("tree dp: transportation cost disagrees with the table optimum");
    result.assignment = tr.assignment;
    result.cost = tr.cost;
    return result;
}

LogkResult solve_logk(const Instance& inst, int k, int samples, std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("solve_logk: samples must be positive");
    if (k < 1 || k > inst.n_facilities()) throw std::invalid_argument("solve_logk: k out of range");
    const int nc = inst.n_clients();
    {
        std::vector<int> caps = inst.capacities;
        for (int& c : caps) c = std::min(c, nc);
        std::sort(caps.begin(), caps.end(), std::greater<int>());
        long long top = 0;
        for (int i = 0; i < std::min<int>(k, static_cast<int>(caps.size())); ++i) top += caps[i];
        if (top < nc)
            throw InfeasibleError("instance infeasible: best k capacities cannot serve all clients",
                                  nc - top);
    }

    UncapSolution uncap = local_search_kmedian(inst, k);
    CenteredInstance centered = build_centered(inst, uncap);
    Metric cm = centered.center_metric();

    SplitMix64 root(seed);
    std::vector<std::uint64_t> sample_seeds(samples);
    for (int i = 0; i < samples; ++i) sample_seeds[i] = root.split();

    auto run_sample = [&](std::size_t i) -> double {
        TreeEmbedding emb = sample_frt(cm, sample_seeds[i]);
        TreeInstance ti = build_tree_instance(centered, emb);
        TreeDpResult dp = solve_tree_dp(ti);
        // Pullback to the original metric costs nothing extra.
        return assignment_cost(dp.assignment, inst.metric);
    };
    auto [best_cost, best_idx] = parallel_min_index(static_cast<std::size_t>(samples), run_sample);

    TreeEmbedding emb = sample_frt(cm, sample_seeds[best_idx]);
    TreeInstance ti = build_tree_instance(centered, emb);
    TreeDpResult dp = solve_tree_dp(ti);

    LogkResult result;
    result.assignment = dp.assignment;
    result.cost = best_cost;
    result.uncap_cost = uncap.cost;
    result.samples_run = samples;
    result.best_seed = sample_seeds[best_idx];
    return result;
}

}  // namespace ckm
