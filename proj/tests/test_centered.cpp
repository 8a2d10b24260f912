#include <doctest.h>

#include <cmath>

#include "ckm/centered.hpp"
#include "test_util.hpp"

using namespace ckm;

TEST_CASE("all facilities open: distances to own nearest facility are preserved") {
    SplitMix64 rng(11);
    for (int it = 0; it < 20; ++it) {
        Instance inst = test::small_random_instance(rng, 5, 6, 2, 6);
        UncapSolution uncap = nearest_assignment(inst, inst.facilities);
        CenteredInstance ci = build_centered(inst, uncap);
        for (std::size_t i = 0; i < inst.clients.size(); ++i) {
            PointId c = inst.clients[i];
            double nearest = std::numeric_limits<double>::infinity();
            for (PointId f : inst.facilities) nearest = std::min(nearest, inst.metric(c, f));
            CHECK(ci.d_ell(c, uncap.psi[i]) == doctest::Approx(nearest));
        }
    }
}

TEST_CASE("single center: star metric through the lone open facility") {
    SplitMix64 rng(13);
    Instance inst = test::small_random_instance(rng, 4, 5, 2, 6);
    PointId s = inst.facilities[1];
    CenteredInstance ci = build_centered(inst, nearest_assignment(inst, {s}));
    const int n = inst.metric.size();
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            if (u == v) continue;
            CHECK(ci.d_ell(u, v) == doctest::Approx(inst.metric(u, s) + inst.metric(s, v)));
        }
}

TEST_CASE("structure: domination, zero-length center pendants, cluster partition") {
    SplitMix64 rng(17);
    for (int it = 0; it < 30; ++it) {
        auto fx = test::random_centered(rng, 6, 7, 3, 3, 8);
        const CenteredInstance& ci = fx.centered;

        // d_ell dominates d on the base points.
        const int nb = ci.base_size();
        for (int u = 0; u < nb; ++u)
            for (int v = 0; v < nb; ++v)
                CHECK(ci.d_ell(u, v) >= fx.instance.metric(u, v) - 1e-9);

        // every center sits on its source facility
        for (int j = 0; j < ci.n_centers(); ++j)
            CHECK(ci.d_ell(ci.centers[j], ci.center_src[j]) == 0.0);

        // clusters partition the facilities
        std::vector<int> seen(nb, 0);
        for (const auto& cluster : ci.f_cluster)
            for (PointId f : cluster) ++seen[f];
        for (PointId f : fx.instance.facilities) CHECK(seen[f] == 1);

        // center_of is a nearest center (ties to the lowest index)
        for (int v = 0; v < nb; ++v) {
            double own = fx.instance.metric(v, ci.center_src[ci.center_index(ci.center_of[v])]);
            for (int j = 0; j < ci.n_centers(); ++j) {
                double other = fx.instance.metric(v, ci.center_src[j]);
                CHECK(own <= other + 1e-12);
                if (other == own) {
                    CHECK(ci.center_of[v] <= ci.centers[j]);
                    break;
                }
            }
        }
    }
}

TEST_CASE("per-client reduction facts hold for every (client, facility) pair") {
    SplitMix64 rng(19);
    for (int it = 0; it < 25; ++it) {
        auto fx = test::random_centered(rng, 5, 6, 2, 3, 6);
        const CenteredInstance& ci = fx.centered;
        const Metric& d = fx.instance.metric;
        auto src = [&](PointId v) { return ci.center_src[ci.center_index(ci.center_of[v])]; };
        for (PointId c : fx.instance.clients)
            for (PointId f : fx.instance.facilities) {
                // d(f, s^f) <= d(f, c) + d(c, s^c)
                CHECK(d(f, src(f)) <= d(f, c) + d(c, src(c)) + 1e-9);
                // d(s^c, s^f) <= 2 (d(f, c) + d(c, s^c))
                CHECK(d(src(c), src(f)) <= 2.0 * (d(f, c) + d(c, src(c))) + 1e-9);
            }
    }
}

TEST_CASE("embedding gap sandwich") {
    SplitMix64 rng(23);
    SUBCASE("arbitrary assignments on random instances") {
        for (int it = 0; it < 60; ++it) {
            auto fx = test::random_centered(rng, 5, 6, 2, 3, 6);
            Assignment phi = test::random_any_assignment(rng, fx.instance);
            EmbeddingGap g = embedding_gap(phi, fx.uncap.cost, fx.instance, fx.centered);
            CHECK(g.lhs <= g.mid + 1e-9);
            CHECK(g.mid <= g.rhs + 1e-9);
        }
    }
    SUBCASE("zero pendant collapse: clients on centers") {
        // Clients co-located with the open facilities: psi_cost = 0 and the
        // centered metric agrees with d on every used edge.
        std::vector<GraphEdge> edges = {{0, 2, 0.0}, {1, 3, 0.0}, {0, 1, 4.0}};
        Instance inst;
        inst.metric = metric_from_weighted_graph(edges, 4);
        inst.facilities = {0, 1};
        inst.capacities = {1, 1};
        inst.clients = {2, 3};
        inst.k = 2;
        UncapSolution uncap = nearest_assignment(inst, {0, 1});
        REQUIRE(uncap.cost == 0.0);
        CenteredInstance ci = build_centered(inst, uncap);

        Assignment phi;  // cross assignment, still bounded by 3*lhs
        phi.open = {0, 1};
        phi.clients = {2, 3};
        phi.phi = {1, 0};
        EmbeddingGap g = embedding_gap(phi, uncap.cost, inst, ci);
        CHECK(g.mid <= 3.0 * g.lhs + 1e-9);

        Assignment straight;
        straight.open = {0, 1};
        straight.clients = {2, 3};
        straight.phi = {0, 1};
        EmbeddingGap g2 = embedding_gap(straight, uncap.cost, inst, ci);
        CHECK(g2.mid == doctest::Approx(g2.lhs));  // zero detour
    }
    SUBCASE("a violated bound throws instead of passing silently") {
        // Understating psi_cost as 0 on an instance with a real detour makes
        // rhs = 3*lhs < mid, which the operation must refuse. The client sits
        // next to facility 1 (lhs = 1) but the only center is facility 0, so
        // the centered path costs 11 + 10 = 21.
        std::vector<GraphEdge> edges = {{0, 1, 10.0}, {1, 2, 1.0}};
        Instance inst;
        inst.metric = metric_from_weighted_graph(edges, 3);
        inst.facilities = {0, 1};
        inst.capacities = {1, 1};
        inst.clients = {2};
        inst.k = 1;
        UncapSolution psi = nearest_assignment(inst, {0});
        CenteredInstance ci = build_centered(inst, psi);
        Assignment phi;
        phi.open = {1};
        phi.clients = {2};
        phi.phi = {1};
        EmbeddingGap g = embedding_gap(phi, psi.cost, inst, ci);  // honest: holds
        CHECK(g.lhs == 1.0);
        CHECK(g.mid == 21.0);
        CHECK_THROWS_AS(embedding_gap(phi, 0.0, inst, ci), std::logic_error);
    }
}

TEST_CASE("candidate D values") {
    SUBCASE("one client, two facilities") {
        Instance inst;
        inst.metric = metric_from_weighted_graph({{0, 2, 2.0}, {1, 2, 7.0}}, 3);
        inst.facilities = {0, 1};
        inst.capacities = {1, 1};
        inst.clients = {2};
        inst.k = 1;
        CenteredInstance ci = build_centered(inst, nearest_assignment(inst, {0}));
        // d_ell(2,0) = 2, d_ell(2,1) = 2 + d(0,1) = 2 + 9 = 11
        CHECK(candidate_D_values(ci) == std::vector<double>{2.0, 11.0});
    }
    SUBCASE("co-located points give a single zero") {
        Instance inst;
        inst.metric = Metric(2);
        inst.facilities = {0};
        inst.capacities = {1};
        inst.clients = {1};
        inst.k = 1;
        CenteredInstance ci = build_centered(inst, nearest_assignment(inst, {0}));
        CHECK(candidate_D_values(ci) == std::vector<double>{0.0});
    }
    SUBCASE("random: distinct, sorted, bounded by the pair count") {
        SplitMix64 rng(29);
        for (int it = 0; it < 20; ++it) {
            auto fx = test::random_centered(rng, 3, 3, 2, 2, 4);
            auto values = candidate_D_values(fx.centered);
            CHECK(values.size() <= 9);
            for (std::size_t i = 1; i < values.size(); ++i) CHECK(values[i - 1] < values[i]);
        }
    }
}

namespace {

// ell-centered fixture with one center and hand-placed facility pendants.
CenteredInstance pendant_fixture(const std::vector<double>& facility_pendants, int n_clients) {
    const int nf = static_cast<int>(facility_pendants.size());
    std::vector<GraphEdge> edges;
    for (int i = 1; i < nf; ++i) edges.push_back({0, i, facility_pendants[i]});
    for (int c = 0; c < n_clients; ++c) edges.push_back({0, nf + c, 1.0});
    Instance inst;
    inst.metric = metric_from_weighted_graph(edges, nf + n_clients);
    inst.facilities.resize(nf);
    for (int i = 0; i < nf; ++i) inst.facilities[i] = i;
    inst.capacities.assign(nf, n_clients);
    inst.clients.resize(n_clients);
    for (int c = 0; c < n_clients; ++c) inst.clients[c] = nf + c;
    inst.k = 1;
    return build_centered(inst, nearest_assignment(inst, {0}));
}

}  // namespace

TEST_CASE("bucket boundaries at eps = 1, D = 8") {
    // facility 0 is the center (pendant 0); facilities at pendants 5, 8, 9.
    CenteredInstance ci = pendant_fixture({0.0, 5.0, 8.0, 9.0}, 2);
    BucketedInstance b = build_buckets(ci, 8.0, 1.0);

    const int last = b.n_buckets - 1;
    CHECK(b.n_buckets == static_cast<int>(std::ceil(std::log2(2.0 / 1.0))) + 1);

    CHECK(b.bucket_of[1] == 0);  // 5 in (4, 8]
    CHECK(b.d_prime(ci.centers[0], 1) == 8.0);
    CHECK(b.bucket_of[2] == 0);  // boundary d = 8 is right-inclusive
    CHECK(b.d_prime(ci.centers[0], 2) == 8.0);
    CHECK(b.removed == std::vector<PointId>{3});  // 9 > D
    CHECK(b.bucket_of[3] == -1);
    CHECK(b.bucket_of[0] == last);  // pendant 0 falls to the closed-at-zero bucket
    CHECK(b.d_prime(ci.centers[0], 0) ==
          doctest::Approx(std::pow(2.0, -last) * 8.0));
}

TEST_CASE("bucket count matches the formula") {
    SplitMix64 rng(37);
    for (double eps : {0.25, 0.5, 1.0, 2.0}) {
        auto fx = test::random_centered(rng, 5, 6, 2, 3, 6);
        auto candidates = candidate_D_values(fx.centered);
        const double D = candidates.back();
        if (D <= 0) continue;
        BucketedInstance b = build_buckets(fx.centered, D, eps);
        const int n = fx.instance.n_clients();
        CHECK(b.n_buckets ==
              static_cast<int>(std::ceil(std::log(n / eps) / std::log1p(eps) - 1e-12)) + 1);
    }
}

TEST_CASE("d_prime dominates d_ell and keeps the rounding sandwich") {
    SplitMix64 rng(41);
    int tested = 0;
    for (int it = 0; it < 60 && tested < 25; ++it) {
        auto fx = test::random_centered(rng, 5, 6, 2, 3, 6);
        auto candidates = candidate_D_values(fx.centered);
        const double D = candidates[candidates.size() / 2];
        const double eps = 0.5;
        BucketedInstance b = build_buckets(fx.centered, D, eps);
        CHECK(fx.centered.d_ell.dominated_by(b.d_prime));

        // Sandwich for assignments whose facilities survive the D bound.
        Assignment phi = test::random_any_assignment(rng, fx.instance);
        bool all_survive = true;
        for (PointId f : phi.open)
            all_survive &= std::find(b.removed.begin(), b.removed.end(), f) == b.removed.end();
        if (!all_survive) continue;
        ++tested;
        const double mid = assignment_cost(phi, fx.centered.d_ell);
        const double rounded = assignment_cost(phi, b.d_prime);
        CHECK(mid <= rounded + 1e-9);
        CHECK(rounded <= (1.0 + eps) * mid + eps * D + 1e-9);
    }
    CHECK(tested >= 10);
}

TEST_CASE("build_buckets rejects negative D and handles the degenerate D = 0") {
    CenteredInstance ci = pendant_fixture({0.0, 5.0}, 2);
    CHECK_THROWS_AS(build_buckets(ci, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(build_buckets(ci, 8.0, 1e-9), std::invalid_argument);  // bucket blowup guard
    BucketedInstance b = build_buckets(ci, 0.0, 1.0);
    CHECK(b.removed == std::vector<PointId>{1});  // positive pendant cannot open
    CHECK(b.surviving == std::vector<PointId>{0});
    CHECK(b.d_prime(ci.centers[0], 0) == 0.0);
}
