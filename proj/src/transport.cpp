#include "ckm/transport.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "ckm/errors.hpp"

namespace ckm {

namespace {

struct Arc {
    int to;
    int rev;    // index of the reverse arc in adj[to]
    int cap;
    double cost;
};

struct FlowGraph {
    std::vector<std::vector<Arc>> adj;

    explicit FlowGraph(int n) : adj(n) {}

    void add(int u, int v, int cap, double cost) {
        adj[u].push_back({v, static_cast<int>(adj[v].size()), cap, cost});
        adj[v].push_back({u, static_cast<int>(adj[u].size()) - 1, 0, -cost});
    }
};

}  // namespace

TransportProblem TransportProblem::from_metric(const Metric& d,
                                               const std::vector<PointId>& open,
                                               const std::vector<int>& capacities,
                                               const std::vector<PointId>& clients) {
    if (open.size() != capacities.size())
        throw std::invalid_argument("transport: open/capacity length mismatch");
    TransportProblem p;
    p.facilities = open;
    p.capacities = capacities;
    p.clients = clients;
    p.cost.resize(clients.size() * open.size());
    for (std::size_t c = 0; c < clients.size(); ++c)
        for (std::size_t f = 0; f < open.size(); ++f)
            p.cost[c * open.size() + f] = d(clients[c], open[f]);
    return p;
}

TransportResult optimal_mapping(const TransportProblem& p) {
    const int nc = static_cast<int>(p.clients.size());
    const int nf = static_cast<int>(p.facilities.size());
    if (nf == 0 && nc > 0) throw InfeasibleError("transport infeasible: no open facilities", nc);
    if (p.capacities.size() != p.facilities.size())
        throw std::invalid_argument("transport: open/capacity length mismatch");
    if (p.cost.size() != static_cast<std::size_t>(nc) * nf)
        throw std::invalid_argument("transport: cost table size mismatch");

    long long total_cap = 0;
    for (int cap : p.capacities) total_cap += cap;
    if (total_cap < nc) {
        std::ostringstream msg;
        msg << "transport infeasible: capacity " << total_cap << " < " << nc << " clients";
        throw InfeasibleError(msg.str(), nc - total_cap);
    }

    TransportResult result;
    result.assignment.clients = p.clients;
    result.assignment.phi.assign(nc, -1);
    result.assignment.open = p.facilities;
    std::sort(result.assignment.open.begin(), result.assignment.open.end());
    result.assignment.open.erase(
        std::unique(result.assignment.open.begin(), result.assignment.open.end()),
        result.assignment.open.end());
    if (nc == 0) return result;

    bool slack = true;
    for (int cap : p.capacities)
        if (cap < nc) { slack = false; break; }
    if (slack) {
        // Capacities cannot bind: separable minimization, ties to the
        // lowest facility index.
        for (int c = 0; c < nc; ++c) {
            int best = 0;
            for (int f = 1; f < nf; ++f)
                if (p.cost_at(c, f) < p.cost_at(c, best) ||
                    (p.cost_at(c, f) == p.cost_at(c, best) &&
                     p.facilities[f] < p.facilities[best]))
                    best = f;
            result.assignment.phi[c] = p.facilities[best];
        }
    } else {
        // Successive shortest augmenting paths with potentials.
        // Nodes: 0 = source, 1..nc clients, nc+1..nc+nf facilities, sink last.
        const int source = 0;
        const int sink = nc + nf + 1;
        FlowGraph g(sink + 1);
        for (int c = 0; c < nc; ++c) g.add(source, 1 + c, 1, 0.0);
        for (int c = 0; c < nc; ++c)
            for (int f = 0; f < nf; ++f) g.add(1 + c, 1 + nc + f, 1, p.cost_at(c, f));
        for (int f = 0; f < nf; ++f) g.add(1 + nc + f, sink, p.capacities[f], 0.0);

        const double inf = std::numeric_limits<double>::infinity();
        std::vector<double> potential(sink + 1, 0.0), dist(sink + 1);
        std::vector<int> prev_node(sink + 1), prev_arc(sink + 1);

        for (int unit = 0; unit < nc; ++unit) {
            std::fill(dist.begin(), dist.end(), inf);
            dist[source] = 0.0;
            using Item = std::pair<double, int>;
            std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
            pq.push({0.0, source});
            while (!pq.empty()) {
                auto [du, u] = pq.top();
                pq.pop();
                if (du > dist[u]) continue;
                for (int i = 0; i < static_cast<int>(g.adj[u].size()); ++i) {
                    const Arc& a = g.adj[u][i];
                    if (a.cap <= 0) continue;
                    // Reduced costs stay nonnegative up to roundoff; clamp.
                    double rc = a.cost + potential[u] - potential[a.to];
                    if (rc < 0.0) rc = 0.0;
                    if (du + rc < dist[a.to]) {
                        dist[a.to] = du + rc;
                        prev_node[a.to] = u;
                        prev_arc[a.to] = i;
                        pq.push({dist[a.to], a.to});
                    }
                }
            }
            if (dist[sink] == inf)
                throw std::logic_error("transport: sink unreachable despite capacity check");
            for (int v = 0; v <= sink; ++v)
                if (dist[v] < inf) potential[v] += dist[v];
            for (int v = sink; v != source; v = prev_node[v]) {
                Arc& a = g.adj[prev_node[v]][prev_arc[v]];
                a.cap -= 1;
                g.adj[a.to][a.rev].cap += 1;
            }
        }

        for (int c = 0; c < nc; ++c) {
            for (const Arc& a : g.adj[1 + c]) {
                if (a.to >= 1 + nc && a.to < 1 + nc + nf && a.cap == 0) {
                    result.assignment.phi[c] = p.facilities[a.to - 1 - nc];
                    break;
                }
            }
            if (result.assignment.phi[c] < 0)
                throw std::logic_error("transport: client left unassigned after flow");
        }
    }

    double total = 0.0;
    for (int c = 0; c < nc; ++c) {
        int fpos = -1;
        for (int f = 0; f < nf; ++f)
            if (p.facilities[f] == result.assignment.phi[c]) { fpos = f; break; }
        total += p.cost_at(c, fpos);
    }
    result.cost = total;
    return result;
}

}  // namespace ckm
