#include "ckm/oracle.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <sstream>

#include "ckm/errors.hpp"
#include "ckm/parallel.hpp"

namespace ckm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_guard(const Instance& inst, int k, const OracleLimits& limits) {
    if (limits.force) return;
    if (inst.n_facilities() > limits.max_facilities || k > limits.max_k) {
        std::ostringstream msg;
        msg << "oracle refused: |F| = " << inst.n_facilities() << ", k = " << k
            << " exceeds the guard (" << limits.max_facilities << ", " << limits.max_k
            << "); pass force to run anyway";
        throw RefusedScaleError(msg.str());
    }
}

// All size-r subsets of positions [0, nf) in colex order.
std::vector<std::vector<int>> subsets_of_size(int nf, int r) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(r);
    std::function<void(int, int)> rec = [&](int max_pos, int left) {
        if (left == 0) {
            out.push_back(cur);
            return;
        }
        for (int p = left - 1; p < max_pos; ++p) {
            cur[left - 1] = p;
            rec(p, left - 1);
        }
    };
    if (r == 0)
        out.push_back({});
    else
        rec(nf, r);
    return out;
}

}  // namespace

OracleResult exact_ckm(const Instance& inst, const OracleLimits& limits) {
    check_guard(inst, inst.k, limits);
    const int nf = inst.n_facilities();
    const int nc = inst.n_clients();

    // Materialize all capacity-feasible <=k subsets; the guard keeps this small.
    std::vector<std::vector<int>> candidates;
    for (int r = 1; r <= std::min(inst.k, nf); ++r)
        for (auto& s : subsets_of_size(nf, r)) {
            long long cap = 0;
            for (int pos : s) cap += inst.capacities[pos];
            if (cap >= nc) candidates.push_back(std::move(s));
        }
    if (candidates.empty()) {
        long long best_cap = 0;
        for (auto& s : subsets_of_size(nf, std::min(inst.k, nf))) {
            long long cap = 0;
            for (int pos : s) cap += inst.capacities[pos];
            best_cap = std::max(best_cap, cap);
        }
        throw InfeasibleError("exact_ckm infeasible: no k-subset can serve all clients",
                              nc - best_cap);
    }

    if (nc == 0) {
        OracleResult r;
        r.assignment.open = {};
        return r;
    }

    auto eval = [&](std::size_t i) -> double {
        std::vector<PointId> open;
        std::vector<int> caps;
        for (int pos : candidates[i]) {
            open.push_back(inst.facilities[pos]);
            caps.push_back(inst.capacities[pos]);
        }
        return optimal_mapping(TransportProblem::from_metric(inst.metric, open, caps, inst.clients))
            .cost;
    };
    auto [best_cost, best_idx] = parallel_min_index(candidates.size(), eval);

    std::vector<PointId> open;
    std::vector<int> caps;
    for (int pos : candidates[best_idx]) {
        open.push_back(inst.facilities[pos]);
        caps.push_back(inst.capacities[pos]);
    }
    TransportResult tr =
        optimal_mapping(TransportProblem::from_metric(inst.metric, open, caps, inst.clients));
    OracleResult result;
    result.assignment = tr.assignment;
    result.cost = tr.cost;
    return result;
}

OracleResult exact_uncap_kmedian(const Instance& inst, int k, const OracleLimits& limits) {
    check_guard(inst, k, limits);
    const int nf = inst.n_facilities();
    if (k < 1 || k > nf) throw std::invalid_argument("exact_uncap_kmedian: k out of range");

    std::vector<std::vector<int>> candidates = subsets_of_size(nf, k);
    auto nearest_cost_of = [&](const std::vector<int>& subset, Assignment* out) -> double {
        double total = 0.0;
        if (out) {
            out->clients = inst.clients;
            out->phi.clear();
            for (int pos : subset) out->open.push_back(inst.facilities[pos]);
            std::sort(out->open.begin(), out->open.end());
        }
        for (PointId c : inst.clients) {
            PointId best_f = -1;
            double best_d = kInf;
            for (int pos : subset) {
                PointId f = inst.facilities[pos];
                double d = inst.metric(c, f);
                if (d < best_d || (d == best_d && f < best_f)) {
                    best_d = d;
                    best_f = f;
                }
            }
            total += best_d;
            if (out) out->phi.push_back(best_f);
        }
        return total;
    };

    auto [best_cost, best_idx] = parallel_min_index(
        candidates.size(), [&](std::size_t i) { return nearest_cost_of(candidates[i], nullptr); });

    OracleResult result;
    result.cost = nearest_cost_of(candidates[best_idx], &result.assignment);
    return result;
}

}  // namespace ckm
