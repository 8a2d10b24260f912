#ifndef CKM_TREE_HPP
#define CKM_TREE_HPP

#include <cstdint>
#include <vector>

#include "ckm/centered.hpp"
#include "ckm/instance.hpp"

namespace ckm {

// A sampled 2-HST over the centers: leaves are exactly the centers, edge
// lengths halve per level, and d_T dominates the center metric on every
// sample (only the expected stretch is probabilistic).
struct TreeEmbedding {
    std::vector<int> parent;       // parent[0] = -1 (root)
    std::vector<double> edge_len;  // to parent; edge_len[0] = 0
    std::vector<int> leaf_of;      // center index -> node id
    std::uint64_t seed = 0;
    double scale = 1.0;            // normalization factor that was undone
    std::vector<double> tree_dist; // m x m derived metric over centers

    int n_nodes() const { return static_cast<int>(parent.size()); }
    double dist(int center_a, int center_b) const {
        return tree_dist[static_cast<std::size_t>(center_a) * leaf_of.size() + center_b];
    }
};

// FRT-style sampling: random permutation plus radius beta in [1, 2) drawn
// log-uniformly, hierarchical ball carving on the distance scale 2^i.
TreeEmbedding sample_frt(const Metric& center_metric, std::uint64_t seed);

// CKM instance on a tree: clients and facilities sit at leaves, internal
// nodes are dummies, every node has at most two children.
struct TreeInstance {
    enum class Leaf { none, client, facility };

    std::vector<int> parent;       // parent[root] = -1
    std::vector<double> edge_len;  // to parent
    std::vector<std::vector<int>> children;
    std::vector<Leaf> leaf_kind;
    std::vector<PointId> leaf_point;  // base point id for client/facility leaves
    std::vector<int> leaf_capacity;   // for facility leaves
    int k = 0;
    int n_clients = 0;
    int base_size = 0;

    int root() const { return 0; }

    // Derives the children lists from the parent array.
    void rebuild_children();

    // Path-length metric over the base point ids of the hosted leaves.
    Metric leaf_metric() const;

    // The hosted points viewed as an Instance under the tree metric.
    Instance as_instance() const;
};

// Replaces the center clique by a sampled tree: every base point hangs off
// its center's leaf by its pendant length, and nodes with more than two
// children are rebalanced through zero-length dummy edges.
TreeInstance build_tree_instance(const CenteredInstance& centered, const TreeEmbedding& emb);

// D(t, k', b): minimum cost of opening exactly k' facilities inside
// subtree t while routing net b clients down through its parent edge
// (b < 0 routes -b clients up), edge cost d(e_t)·|b| included.
struct DpTable {
    int n_nodes = 0;
    int max_k = 0;
    int balance_span = 0;  // b ranges over [-n, n], n = client count
    std::vector<double> value;  // indexed by (node, k', b + n)

    double at(int node, int k, int b) const {
        return value[(static_cast<std::size_t>(node) * (max_k + 1) + k) * (2 * balance_span + 1)
                     + (b + balance_span)];
    }
};

DpTable compute_tree_dp_table(const TreeInstance& t);

struct TreeDpResult {
    Assignment assignment;
    double cost = 0.0;  // exact optimum under the tree metric
    int k_opened = 0;
};

// Exact CKM on the tree: min over k' of D(root, k', 0), with the realizing
// assignment recovered by backtracking plus one transportation solve on the
// tree metric restricted to the chosen open set.
TreeDpResult solve_tree_dp(const TreeInstance& t);

struct LogkResult {
    Assignment assignment;
    double cost = 0.0;  // under the original metric d
    double uncap_cost = 0.0;
    int samples_run = 0;
    std::uint64_t best_seed = 0;
};

// O(log k)-approximation: k-facility local search seeds a k-centered
// instance, each sample replaces the center clique by a random tree, the
// tree optimum is pulled back to d at no extra cost, best of all samples.
LogkResult solve_logk(const Instance& inst, int k, int samples, std::uint64_t seed);

}  // namespace ckm

#endif  // CKM_TREE_HPP
