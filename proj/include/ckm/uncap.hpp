#ifndef CKM_UNCAP_HPP
#define CKM_UNCAP_HPP

#include <vector>

#include "ckm/instance.hpp"

namespace ckm {

// Relaxed (uncapacitated) solution used to seed the centered reduction.
// psi[i] is a nearest open facility of clients[i] (ties: lowest index).
struct UncapSolution {
    std::vector<PointId> open;
    std::vector<PointId> psi;  // parallel to the instance's client list
    int ell_budget = 0;        // the bound ℓ the solver ran with
    double cost = 0.0;         // Σ_c d(c, psi(c))
};

// Nearest-open-facility map over an explicit open set; shared by both
// solvers and by tests that fabricate uncapacitated solutions.
UncapSolution nearest_assignment(const Instance& inst, std::vector<PointId> open);

// Greedy star cover: repeatedly picks the (facility, distance-ranked client
// prefix) star of minimum cost per newly covered client. Opens at most
// ceil((1 + 1/epsilon) * k * (ln n + 1)) facilities; once the budget is
// reached, the remaining stars are restricted to already-open facilities.
UncapSolution bicriteria_greedy(const Instance& inst, int k, double epsilon);

// Single-swap local search, first-improvement in index order, starting from
// a greedy initialization. Opens exactly min(k, |F|) facilities. A swap is
// accepted only if it improves the cost by factor >= (1 - 1e-9).
UncapSolution local_search_kmedian(const Instance& inst, int k, long long max_iters = -1);

}  // namespace ckm

#endif  // CKM_UNCAP_HPP
