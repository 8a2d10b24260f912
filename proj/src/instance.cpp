#include "ckm/instance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ckm {

Metric Metric::from_dense(std::vector<double> row_major, int n) {
    if (static_cast<std::size_t>(n) * n != row_major.size())
        throw std::invalid_argument("dense metric: size mismatch");
    Metric m;
    m.n_ = n;
    m.d_ = std::move(row_major);
    return m;
}

bool Metric::dominated_by(const Metric& other, double tol) const {
    if (other.n_ != n_) return false;
    for (std::size_t i = 0; i < d_.size(); ++i)
        if (other.d_[i] < d_[i] - tol) return false;
    return true;
}

Metric metric_from_weighted_graph(const std::vector<GraphEdge>& edges, int n) {
    if (n <= 0) throw std::invalid_argument("graph metric: point count must be positive");
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> d(static_cast<std::size_t>(n) * n, inf);
    for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i) * n + i] = 0.0;
    for (const auto& e : edges) {
        if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
            throw std::invalid_argument("graph metric: edge endpoint out of range");
        if (e.w < 0) throw std::invalid_argument("graph metric: negative edge weight");
        std::size_t uv = static_cast<std::size_t>(e.u) * n + e.v;
        std::size_t vu = static_cast<std::size_t>(e.v) * n + e.u;
        d[uv] = std::min(d[uv], e.w);
        d[vu] = std::min(d[vu], e.w);
    }
    // Floyd-Warshall; instances are dense anyway.
    for (int m = 0; m < n; ++m)
        for (int i = 0; i < n; ++i) {
            const double dim = d[static_cast<std::size_t>(i) * n + m];
            if (dim == inf) continue;
            for (int j = 0; j < n; ++j) {
                double cand = dim + d[static_cast<std::size_t>(m) * n + j];
                double& cur = d[static_cast<std::size_t>(i) * n + j];
                if (cand < cur) cur = cand;
            }
        }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (d[static_cast<std::size_t>(i) * n + j] == inf) {
                std::ostringstream msg;
                msg << "graph metric: no path between points " << i << " and " << j;
                throw std::invalid_argument(msg.str());
            }
    return Metric::from_dense(std::move(d), n);
}

int Instance::capacity_of(PointId f) const {
    for (std::size_t i = 0; i < facilities.size(); ++i)
        if (facilities[i] == f) return capacities[i];
    throw std::out_of_range("capacity_of: not a facility id");
}

double assignment_cost(const Assignment& a, const Metric& d) {
    if (a.phi.size() != a.clients.size())
        throw std::out_of_range("assignment_cost: phi/clients size mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < a.clients.size(); ++i) {
        PointId c = a.clients[i];
        PointId f = a.phi[i];
        if (c < 0 || c >= d.size() || f < 0 || f >= d.size())
            throw std::out_of_range("assignment_cost: point id outside the metric");
        total += d(c, f);
    }
    return total;
}

std::vector<std::string> validate_instance(const Instance& inst, bool check_triangle, double tol) {
    std::vector<std::string> report;
    const Metric& d = inst.metric;
    const int n = d.size();
    auto add = [&report](const std::string& s) { report.push_back(s); };

    for (PointId p : inst.facilities)
        if (p < 0 || p >= n) add("facility id " + std::to_string(p) + " outside the metric");
    for (PointId p : inst.clients)
        if (p < 0 || p >= n) add("client id " + std::to_string(p) + " outside the metric");
    if (inst.capacities.size() != inst.facilities.size())
        add("capacities/facilities length mismatch");
    for (std::size_t i = 0; i < inst.capacities.size(); ++i)
        if (inst.capacities[i] < 0)
            add("negative capacity at facility position " + std::to_string(i));

    for (int u = 0; u < n; ++u) {
        if (std::abs(d(u, u)) > tol)
            add("nonzero diagonal at point " + std::to_string(u));
        for (int v = u + 1; v < n; ++v) {
            if (std::abs(d(u, v) - d(v, u)) > tol)
                add("asymmetric distance between points " + std::to_string(u) + " and " +
                    std::to_string(v));
            if (d(u, v) < -tol)
                add("negative distance between points " + std::to_string(u) + " and " +
                    std::to_string(v));
        }
    }
    if (check_triangle) {
        for (int u = 0; u < n && report.size() < 100; ++u)
            for (int v = 0; v < n; ++v)
                for (int w = 0; w < n; ++w)
                    if (d(u, w) > d(u, v) + d(v, w) + tol) {
                        std::ostringstream msg;
                        msg << "triangle inequality violated on (" << u << ", " << v << ", " << w
                            << ")";
                        add(msg.str());
                        v = w = n;  // one report per u is enough
                    }
    }

    if (inst.k < 1) add("k must be positive");
    if (inst.k > inst.n_facilities())
        add("k exceeds the number of facilities");

    // Necessary feasibility condition: the k largest capacities must cover
    // the clients.
    std::vector<int> caps = inst.capacities;
    std::sort(caps.begin(), caps.end(), std::greater<int>());
    long long top = 0;
    for (int i = 0; i < std::min<int>(inst.k, static_cast<int>(caps.size())); ++i) top += caps[i];
    if (top < inst.n_clients()) {
        std::ostringstream msg;
        msg << "infeasible: the " << inst.k << " largest capacities serve " << top << " of "
            << inst.n_clients() << " clients";
        add(msg.str());
    }
    return report;
}

std::vector<std::string> validate_assignment(const Instance& inst, const Assignment& a) {
    std::vector<std::string> report;
    auto add = [&report](const std::string& s) { report.push_back(s); };

    if (static_cast<int>(a.open.size()) > inst.k)
        add("more than k facilities open");
    if (a.clients.size() != inst.clients.size() || a.phi.size() != inst.clients.size())
        add("assignment does not cover every client exactly once");

    std::vector<long long> load(inst.facilities.size(), 0);
    auto facility_pos = [&inst](PointId f) -> int {
        for (std::size_t i = 0; i < inst.facilities.size(); ++i)
            if (inst.facilities[i] == f) return static_cast<int>(i);
        return -1;
    };
    for (std::size_t i = 0; i < a.phi.size() && i < a.clients.size(); ++i) {
        if (i < inst.clients.size() && a.clients[i] != inst.clients[i])
            add("client order differs from the instance at position " + std::to_string(i));
        int pos = facility_pos(a.phi[i]);
        if (pos < 0) {
            add("client " + std::to_string(a.clients[i]) + " assigned to non-facility " +
                std::to_string(a.phi[i]));
            continue;
        }
        bool is_open = std::find(a.open.begin(), a.open.end(), a.phi[i]) != a.open.end();
        if (!is_open)
            add("client " + std::to_string(a.clients[i]) + " assigned to closed facility " +
                std::to_string(a.phi[i]));
        ++load[pos];
    }
    for (std::size_t i = 0; i < load.size(); ++i)
        if (load[i] > inst.capacities[i])
            add("capacity exceeded at facility " + std::to_string(inst.facilities[i]) + " (" +
                std::to_string(load[i]) + " > " + std::to_string(inst.capacities[i]) + ")");
    return report;
}

}  // namespace ckm
