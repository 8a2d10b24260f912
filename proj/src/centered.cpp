#include "ckm/centered.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ckm {

namespace {

// Shortest-path metric of the centered graph in closed form: every path
// between non-centers runs pendant → clique → pendant, and the clique
// preserves the base metric, so no multi-hop clique path is ever shorter.
Metric centered_metric(const Instance& base, const std::vector<PointId>& center_src,
                       const std::vector<PointId>& center_of) {
    const int nb = base.metric.size();
    const int ns = static_cast<int>(center_src.size());
    const int n = nb + ns;
    Metric d(n);
    auto src = [&](PointId p) { return p < nb ? center_src[center_of[p] - nb] : center_src[p - nb]; };
    auto pendant = [&](PointId p) { return p < nb ? base.metric(p, src(p)) : 0.0; };
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            double w = pendant(u) + base.metric(src(u), src(v)) + pendant(v);
            d.set(u, v, w);
        }
    return d;
}

}  // namespace

Metric CenteredInstance::center_metric() const {
    const int m = n_centers();
    Metric d(m);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) d.set(i, j, base.metric(center_src[i], center_src[j]));
    return d;
}

Instance CenteredInstance::as_instance() const {
    Instance inst = base;
    inst.metric = d_ell;
    return inst;
}

CenteredInstance build_centered(const Instance& inst, const UncapSolution& uncap) {
    if (uncap.open.empty()) throw std::invalid_argument("build_centered: no open facilities");
    CenteredInstance ci;
    ci.base = inst;
    ci.center_src = uncap.open;
    std::sort(ci.center_src.begin(), ci.center_src.end());
    ci.center_src.erase(std::unique(ci.center_src.begin(), ci.center_src.end()),
                        ci.center_src.end());

    const int nb = inst.metric.size();
    const int ns = static_cast<int>(ci.center_src.size());
    ci.centers.resize(ns);
    for (int j = 0; j < ns; ++j) ci.centers[j] = nb + j;

    // s^v = nearest center under d, ties to the lowest center index. Center
    // sources are sorted by facility id, so this matches psi's tie rule.
    ci.center_of.resize(nb);
    for (PointId v = 0; v < nb; ++v) {
        int best = 0;
        for (int j = 1; j < ns; ++j)
            if (inst.metric(v, ci.center_src[j]) < inst.metric(v, ci.center_src[best])) best = j;
        ci.center_of[v] = ci.centers[best];
    }

    ci.d_ell = centered_metric(inst, ci.center_src, ci.center_of);

    ci.f_cluster.assign(ns, {});
    for (PointId f : inst.facilities) ci.f_cluster[ci.center_of[f] - nb].push_back(f);
    return ci;
}

CenteredInstance centered_from_instance(const Instance& inst_with_centers,
                                        const std::vector<PointId>& centers) {
    if (centers.empty()) throw std::invalid_argument("centered_from_instance: no centers");
    const Metric& d = inst_with_centers.metric;
    const int n = d.size();
    const int ns = static_cast<int>(centers.size());
    for (int j = 0; j < ns; ++j)
        if (centers[j] != n - ns + j)
            throw std::invalid_argument(
                "centered_from_instance: centers must be the trailing point ids");
    const int nb = n - ns;

    CenteredInstance ci;
    ci.base = inst_with_centers;
    ci.base.metric = Metric(nb);
    for (int u = 0; u < nb; ++u)
        for (int v = u + 1; v < nb; ++v) ci.base.metric.set(u, v, d(u, v));
    ci.centers = centers;
    ci.d_ell = d;

    // Each center is at distance 0 from its source facility.
    ci.center_src.resize(ns);
    for (int j = 0; j < ns; ++j) {
        PointId src = -1;
        for (PointId f : inst_with_centers.facilities)
            if (d(f, centers[j]) == 0.0) { src = f; break; }
        if (src < 0)
            throw std::invalid_argument(
                "centered_from_instance: center " + std::to_string(centers[j]) +
                " has no facility at distance zero");
        ci.center_src[j] = src;
    }

    ci.center_of.resize(nb);
    for (PointId v = 0; v < nb; ++v) {
        int best = 0;
        for (int j = 1; j < ns; ++j)
            if (d(v, centers[j]) < d(v, centers[best])) best = j;
        ci.center_of[v] = centers[best];
    }
    ci.f_cluster.assign(ns, {});
    for (PointId f : ci.base.facilities) ci.f_cluster[ci.center_of[f] - nb].push_back(f);
    return ci;
}

EmbeddingGap embedding_gap(const Assignment& phi, double psi_cost, const Instance& inst,
                           const CenteredInstance& centered) {
    EmbeddingGap g;
    g.lhs = assignment_cost(phi, inst.metric);
    g.mid = assignment_cost(phi, centered.d_ell);
    g.rhs = 3.0 * g.lhs + 4.0 * psi_cost;
    const double tol = 1e-9;
    if (g.lhs > g.mid + tol || g.mid > g.rhs + tol) {
        std::ostringstream msg;
        msg << "embedding gap violated: cost(phi,d)=" << g.lhs << ", cost(phi,d_ell)=" << g.mid
            << ", bound=" << g.rhs;
        throw std::logic_error(msg.str());
    }
    return g;
}

std::vector<double> candidate_D_values(const CenteredInstance& centered) {
    std::set<double> values;
    for (PointId c : centered.base.clients)
        for (PointId f : centered.base.facilities) values.insert(centered.d_ell(c, f));
    return std::vector<double>(values.begin(), values.end());
}

BucketedInstance build_buckets(const CenteredInstance& centered, double D, double epsilon) {
    if (epsilon <= 0) throw std::invalid_argument("build_buckets: epsilon must be positive");
    if (D < 0) throw std::invalid_argument("build_buckets: D must be nonnegative");

    BucketedInstance b;
    b.D = D;
    b.epsilon = epsilon;

    const int n = std::max(1, centered.base.n_clients());
    const double log_base = std::log1p(epsilon);
    const double last_formula = std::ceil(std::log(n / epsilon) / log_base - 1e-12);
    if (last_formula > 1e7)
        throw std::invalid_argument(
            "build_buckets: epsilon too small, would create " +
            std::to_string(last_formula) + " buckets");
    const int last = std::max(0, static_cast<int>(last_formula));
    b.n_buckets = last + 1;

    b.bucket_radius.resize(b.n_buckets);
    for (int i = 0; i <= last; ++i) b.bucket_radius[i] = std::pow(1.0 + epsilon, -i) * D;

    const auto& facilities = centered.base.facilities;
    b.bucket_of.assign(facilities.size(), -1);
    for (std::size_t pos = 0; pos < facilities.size(); ++pos) {
        const PointId f = facilities[pos];
        const double x = centered.pendant(f);
        if (x > D) {
            b.removed.push_back(f);
            continue;
        }
        int bucket = last;
        if (x > 0.0 && D > 0.0) {
            // x in ((1+eps)^-(i+1) D, (1+eps)^-i D]  =>  i = floor(log(D/x)).
            bucket = static_cast<int>(std::floor(std::log(D / x) / log_base + 1e-12));
            bucket = std::clamp(bucket, 0, last);
        }
        b.bucket_of[pos] = bucket;
        b.surviving.push_back(f);
    }

    // d_prime: identical to d_ell except the rounded facility pendants.
    const int np = centered.d_ell.size();
    const int nb = centered.base_size();
    std::vector<double> pendant(np, 0.0);
    for (PointId v = 0; v < nb; ++v) pendant[v] = centered.pendant(v);
    for (std::size_t pos = 0; pos < facilities.size(); ++pos)
        if (b.bucket_of[pos] >= 0) pendant[facilities[pos]] = b.bucket_radius[b.bucket_of[pos]];

    Metric dp(np);
    auto center_id = [&](PointId p) { return p < nb ? centered.center_of[p] : p; };
    for (int u = 0; u < np; ++u)
        for (int v = u + 1; v < np; ++v) {
            double w = pendant[u] + centered.d_ell(center_id(u), center_id(v)) + pendant[v];
            dp.set(u, v, w);
        }
    b.d_prime = dp;
    return b;
}

}  // namespace ckm
