#include "ckm/uncap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ckm {

namespace {

// Nearest open facility of one client, ties to the lowest facility id.
PointId nearest_open(const Metric& d, PointId c, const std::vector<PointId>& open) {
    PointId best = open.front();
    for (PointId f : open)
        if (d(c, f) < d(c, best) || (d(c, f) == d(c, best) && f < best)) best = f;
    return best;
}

double nearest_cost(const Instance& inst, const std::vector<PointId>& open) {
    double total = 0.0;
    for (PointId c : inst.clients) total += inst.metric(c, nearest_open(inst.metric, c, open));
    return total;
}

}  // namespace

UncapSolution nearest_assignment(const Instance& inst, std::vector<PointId> open) {
    if (open.empty()) throw std::invalid_argument("nearest_assignment: empty open set");
    std::sort(open.begin(), open.end());
    open.erase(std::unique(open.begin(), open.end()), open.end());
    UncapSolution sol;
    sol.open = std::move(open);
    sol.ell_budget = static_cast<int>(sol.open.size());
    sol.psi.reserve(inst.clients.size());
    for (PointId c : inst.clients) {
        PointId f = nearest_open(inst.metric, c, sol.open);
        sol.psi.push_back(f);
        sol.cost += inst.metric(c, f);
    }
    return sol;
}

UncapSolution bicriteria_greedy(const Instance& inst, int k, double epsilon) {
    if (inst.n_facilities() == 0) throw std::invalid_argument("bicriteria_greedy: no facilities");
    if (epsilon <= 0) throw std::invalid_argument("bicriteria_greedy: epsilon must be positive");
    if (k < 1) throw std::invalid_argument("bicriteria_greedy: k must be positive");

    const int n = inst.n_clients();
    const double ell_formula =
        std::ceil((1.0 + 1.0 / epsilon) * k * (std::log(std::max(1, n)) + 1.0));
    const int ell = static_cast<int>(std::clamp(ell_formula, 1.0, 1e9));
    if (n == 0) {
        UncapSolution sol = nearest_assignment(inst, {inst.facilities.front()});
        sol.ell_budget = ell;
        return sol;
    }

    std::vector<PointId> open;
    std::vector<char> covered(n, 0);
    int n_covered = 0;

    std::vector<std::pair<double, int>> by_dist;  // (distance, client position)
    while (n_covered < n) {
        const bool budget_left = static_cast<int>(open.size()) < ell;
        double best_ratio = std::numeric_limits<double>::infinity();
        PointId best_f = -1;
        int best_len = 0;
        std::vector<int> best_star, star;

        auto consider = [&](PointId f) {
            by_dist.clear();
            for (int i = 0; i < n; ++i)
                if (!covered[i]) by_dist.push_back({inst.metric(inst.clients[i], f), i});
            std::sort(by_dist.begin(), by_dist.end());
            double star_cost = 0.0;
            star.clear();
            for (std::size_t j = 0; j < by_dist.size(); ++j) {
                star_cost += by_dist[j].first;
                star.push_back(by_dist[j].second);
                double ratio = star_cost / static_cast<double>(j + 1);
                // Ties fall to the lower facility id, then the longer star.
                if (ratio < best_ratio ||
                    (ratio == best_ratio &&
                     (f < best_f || (f == best_f && static_cast<int>(j + 1) > best_len)))) {
                    best_ratio = ratio;
                    best_f = f;
                    best_len = static_cast<int>(j + 1);
                    best_star = star;
                }
            }
        };

        if (budget_left) {
            for (PointId f : inst.facilities) consider(f);
        } else {
            for (PointId f : open) consider(f);
        }
        if (best_f < 0) throw std::logic_error("bicriteria_greedy: no star found");

        if (std::find(open.begin(), open.end(), best_f) == open.end()) open.push_back(best_f);
        for (int i : best_star)
            if (!covered[i]) {
                covered[i] = 1;
                ++n_covered;
            }
    }

    UncapSolution sol = nearest_assignment(inst, std::move(open));
    sol.ell_budget = ell;
    return sol;
}

UncapSolution local_search_kmedian(const Instance& inst, int k, long long max_iters) {
    if (inst.n_facilities() == 0)
        throw std::invalid_argument("local_search_kmedian: no facilities");
    if (k < 1) throw std::invalid_argument("local_search_kmedian: k must be positive");
    const int open_target = std::min<int>(k, inst.n_facilities());
    if (max_iters < 0)
        max_iters = 100LL * open_target * inst.n_facilities();

    // Greedy start: repeatedly add the facility with the largest cost drop.
    std::vector<PointId> open;
    std::vector<char> is_open(inst.metric.size(), 0);
    for (int step = 0; step < open_target; ++step) {
        PointId best = -1;
        double best_cost = std::numeric_limits<double>::infinity();
        for (PointId f : inst.facilities) {
            if (is_open[f]) continue;
            open.push_back(f);
            double c = nearest_cost(inst, open);
            open.pop_back();
            if (c < best_cost) {
                best_cost = c;
                best = f;
            }
        }
        open.push_back(best);
        is_open[best] = 1;
    }
    std::sort(open.begin(), open.end());
    double cur_cost = nearest_cost(inst, open);

    // Single swaps, first improvement, scan order by index.
    long long iters = 0;
    bool improved = true;
    while (improved && iters < max_iters) {
        improved = false;
        for (std::size_t out = 0; out < open.size() && !improved; ++out) {
            for (PointId f_in : inst.facilities) {
                if (is_open[f_in]) continue;
                PointId f_out = open[out];
                open[out] = f_in;
                double cand = nearest_cost(inst, open);
                if (cand < cur_cost && cand <= cur_cost * (1.0 - 1e-9)) {
                    is_open[f_out] = 0;
                    is_open[f_in] = 1;
                    cur_cost = cand;
                    std::sort(open.begin(), open.end());
                    improved = true;
                    ++iters;
                    break;
                }
                open[out] = f_out;
            }
        }
    }

    UncapSolution sol = nearest_assignment(inst, std::move(open));
    sol.ell_budget = open_target;
    return sol;
}

}  // namespace ckm
