#ifndef CKM_INSTANCE_HPP
#define CKM_INSTANCE_HPP

#include <string>
#include <vector>

namespace ckm {

// Index of a point in the combined point set F ∪ C (centered instances
// append their centers after the base points).
using PointId = int;

// Dense symmetric metric over an indexed point set. Distances are
// real-valued; comparisons elsewhere use absolute tolerance 1e-9.
class Metric {
public:
    Metric() = default;
    explicit Metric(int n) : n_(n), d_(static_cast<std::size_t>(n) * n, 0.0) {}

    static Metric from_dense(std::vector<double> row_major, int n);

    int size() const { return n_; }

    double operator()(PointId u, PointId v) const {
        return d_[static_cast<std::size_t>(u) * n_ + v];
    }

    // Sets both d(u,v) and d(v,u).
    void set(PointId u, PointId v, double w) {
        d_[static_cast<std::size_t>(u) * n_ + v] = w;
        d_[static_cast<std::size_t>(v) * n_ + u] = w;
    }

    const std::vector<double>& data() const { return d_; }

    // True when d' >= this pointwise (both metrics over the same point set).
    bool dominated_by(const Metric& other, double tol = 1e-9) const;

private:
    int n_ = 0;
    std::vector<double> d_;
};

struct GraphEdge {
    PointId u = 0;
    PointId v = 0;
    double w = 0.0;
};

// Shortest-path metric of a connected weighted graph. Satisfies all metric
// invariants by construction. Throws std::invalid_argument naming an
// unreachable pair if the graph is disconnected.
Metric metric_from_weighted_graph(const std::vector<GraphEdge>& edges, int n);

// A CKM instance: facilities with integer capacities, clients, a metric over
// all points, and the budget k. Base instances have facilities 0..n_f-1 and
// clients n_f..n_f+n_c-1 partitioning the metric's point set; derived
// instances (centered, tree) reuse the same ids under a larger metric.
struct Instance {
    Metric metric;
    std::vector<PointId> facilities;
    std::vector<int> capacities;  // parallel to facilities, u_f >= 0
    std::vector<PointId> clients;
    int k = 0;

    int n_facilities() const { return static_cast<int>(facilities.size()); }
    int n_clients() const { return static_cast<int>(clients.size()); }

    int capacity_of(PointId f) const;  // throws if f is not a facility
};

// A solution: open facilities (|open| <= k) and the connection map. phi[i]
// is the facility serving clients[i]; carrying the client ids makes the
// assignment evaluable under any metric over the same point set.
struct Assignment {
    std::vector<PointId> open;
    std::vector<PointId> clients;
    std::vector<PointId> phi;
};

// Σ_c d(c, phi(c)). Pure; evaluating one assignment under several metrics
// (d, d_ℓ, d'_ℓ, tree) is the central use case. Throws std::out_of_range
// for point ids outside the metric.
double assignment_cost(const Assignment& a, const Metric& d);

// Structural checks on an instance. Violations are data, not failures;
// an empty report means valid. The O(n³) triangle-inequality scan is
// opt-in via check_triangle.
std::vector<std::string> validate_instance(const Instance& inst,
                                           bool check_triangle = false,
                                           double tol = 1e-9);

// Re-validation of a solver output against its instance: every client
// assigned to an open facility, capacities respected, |open| <= k.
std::vector<std::string> validate_assignment(const Instance& inst, const Assignment& a);

}  // namespace ckm

#endif  // CKM_INSTANCE_HPP
