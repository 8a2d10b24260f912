#ifndef CKM_TRANSPORT_HPP
#define CKM_TRANSPORT_HPP

#include <vector>

#include "ckm/instance.hpp"

namespace ckm {

// Assignment of clients to a fixed open set: unit demand per client,
// capacity u_f per facility, arbitrary nonnegative cost table.
struct TransportProblem {
    std::vector<PointId> facilities;  // the open set
    std::vector<int> capacities;      // parallel to facilities
    std::vector<PointId> clients;
    std::vector<double> cost;  // row-major |clients| x |facilities|

    double cost_at(int c, int f) const {
        return cost[static_cast<std::size_t>(c) * facilities.size() + f];
    }

    // Cost table = metric restricted to clients x open facilities.
    static TransportProblem from_metric(const Metric& d,
                                        const std::vector<PointId>& open,
                                        const std::vector<int>& capacities,
                                        const std::vector<PointId>& clients);
};

struct TransportResult {
    Assignment assignment;
    double cost = 0.0;  // recomputed from the assignment, not accumulated flow
};

// Exact minimum-cost capacity-respecting assignment. Min-cost flow with
// successive shortest augmenting paths and potentials; the output is always
// integral. Throws InfeasibleError (with the shortfall) when total capacity
// is below the client count.
TransportResult optimal_mapping(const TransportProblem& p);

}  // namespace ckm

#endif  // CKM_TRANSPORT_HPP
