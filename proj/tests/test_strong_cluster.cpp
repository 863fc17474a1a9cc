#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <deque>
#include <map>

#include "bruteforce.hpp"
#include "doctest.h"
#include "lddkit/errors.hpp"
#include "lddkit/strong_cluster.hpp"

using namespace lddkit;

namespace {

// Plain queue BFS over an explicit alive mask, independent of the library's
// shortest-path engine.
std::vector<int64_t> hop_bfs(const WeightedGraph& g, const std::vector<char>& alive,
                             NodeId s) {
    std::vector<int64_t> d(g.n, -1);
    std::deque<NodeId> q;
    d[s] = 0;
    q.push_back(s);
    while (!q.empty()) {
        NodeId v = q.front();
        q.pop_front();
        for (int32_t i = g.adj_off[v]; i < g.adj_off[v + 1]; ++i) {
            NodeId w = g.other(g.adj_edge[i], v);
            if (!alive[w] || d[w] >= 0) continue;
            d[w] = d[v] + 1;
            q.push_back(w);
        }
    }
    return d;
}

void check_clustering_contract(const WeightedGraph& g, const StrongClustering& cl) {
    const int64_t b = g.bits;
    std::vector<int32_t> owner(g.n, -1);
    int64_t covered = 0;
    for (size_t c = 0; c < cl.clusters.size(); ++c) {
        for (NodeId v : cl.clusters[c].nodes) {
            REQUIRE(owner[v] == -1);
            owner[v] = (int32_t)c;
        }
        covered += (int64_t)cl.clusters[c].nodes.size();
    }
    for (NodeId v : cl.unclustered) {
        REQUIRE(owner[v] == -1);
        owner[v] = -2;
    }
    for (NodeId v = 0; v < g.n; ++v) REQUIRE(owner[v] != -1); // partition of V

    CHECK(3 * covered >= 2 * (int64_t)g.n); // coverage >= ceil(2n/3)

    // 2-separation: no edge joins two distinct clusters.
    for (const Edge& e : g.edges)
        if (owner[e.u] >= 0 && owner[e.v] >= 0) CHECK(owner[e.u] == owner[e.v]);

    for (size_t c = 0; c < cl.clusters.size(); ++c) {
        const StrongCluster& cc = cl.clusters[c];
        REQUIRE(!cc.nodes.empty());
        REQUIRE(owner[cc.center] == (int32_t)c);

        // The tree is a spanning tree of the cluster made of cluster edges.
        REQUIRE(cc.tree_edges.size() + 1 == cc.nodes.size());
        std::map<NodeId, NodeId> parent;
        for (auto& pe : cc.tree_edges) {
            CHECK(owner[pe[0]] == (int32_t)c);
            CHECK(owner[pe[1]] == (int32_t)c);
            CHECK(g.find_edge(pe[0], pe[1]) >= 0);
            REQUIRE(parent.emplace(pe[1], pe[0]).second); // one parent per child
            CHECK(pe[1] != cc.center);
        }
        // Radius: hop distances from the center, restricted to the cluster.
        std::vector<char> alive(g.n, 0);
        for (NodeId v : cc.nodes) alive[v] = 1;
        auto d = hop_bfs(g, alive, cc.center);
        int64_t rad = 0;
        for (NodeId v : cc.nodes) {
            REQUIRE(d[v] >= 0); // connected
            rad = std::max(rad, d[v]);
        }
        CHECK(rad <= 6 * b * b);
        CHECK(cc.radius >= rad); // reported tree radius can only be larger
        CHECK(cc.radius <= 6 * b * b);
    }
}

} // namespace

TEST_CASE("single node forms a singleton cluster") {
    WeightedGraph g = parse_graph("p 1 0\n", "t");
    StrongClustering cl = strong_cluster(g);
    REQUIRE(cl.clusters.size() == 1);
    CHECK(cl.clusters[0].center == 0);
    CHECK(cl.clusters[0].nodes == std::vector<NodeId>{0});
    CHECK(cl.unclustered.empty());
}

TEST_CASE("two isolated nodes: no phase deletes anything") {
    WeightedGraph g = parse_graph("p 2 0\n", "t");
    StrongClustering cl = strong_cluster(g);
    REQUIRE(cl.clusters.size() == 2);
    CHECK(cl.unclustered.empty());
    for (const auto& ph : cl.phases) CHECK(ph.deleted == 0);
}

TEST_CASE("edgeless graphs cluster every node as a singleton") {
    WeightedGraph g = parse_graph("p 5 0\n", "t");
    StrongClustering cl = strong_cluster(g);
    CHECK(cl.clusters.size() == 5);
    CHECK(cl.unclustered.empty());
    check_clustering_contract(g, cl);
}

TEST_CASE("three-node path leaves at most one node unclustered") {
    WeightedGraph g = parse_graph("p 3 2\ne 0 1 1\ne 1 2 1\n", "t");
    StrongClustering cl = strong_cluster(g);
    CHECK(cl.unclustered.size() <= 1);
    check_clustering_contract(g, cl);
}

TEST_CASE("weighted input and duplicate identifiers are rejected") {
    WeightedGraph w = parse_graph("p 2 1\ne 0 1 3\n", "t");
    CHECK_THROWS_AS(strong_cluster(w), PreconditionError);
    WeightedGraph d = parse_graph("p 2 1\ne 0 1 1\n", "t");
    d.ids[1] = d.ids[0]; // corrupt after parsing
    CHECK_THROWS_AS(strong_cluster(d), PreconditionError);
}

TEST_CASE("contract holds on random graphs, one count call per bit") {
    SplitRng rng(101);
    for (int it = 0; it < 60; ++it) {
        int n = 2 + (int)rng.below(120);
        bool connected = rng.below(4) != 0;
        WeightedGraph g = bf::rand_graph(rng, n, (int)rng.below(3 * (uint64_t)n), 1,
                                         connected);
        if (rng.coin()) bf::shuffle_ids(g, rng);
        OracleCtx ctx;
        StrongClustering cl = strong_cluster(g, &ctx);
        CHECK(ctx.stats.count_calls == g.bits);
        CHECK(ctx.stats.dist_calls == 0); // only the counting oracle is used
        CHECK((int)cl.phases.size() == g.bits);
        check_clustering_contract(g, cl);
    }
}

TEST_CASE("wider identifiers than ceil(log2 n) are honored") {
    SplitRng rng(7);
    WeightedGraph g = bf::rand_graph(rng, 40, 60, 1);
    for (NodeId v = 0; v < g.n; ++v) g.ids[v] = 5 * (uint64_t)v + 2;
    g.finalize();
    REQUIRE(g.bits == 8); // max id 197
    OracleCtx ctx;
    StrongClustering cl = strong_cluster(g, &ctx);
    CHECK(ctx.stats.count_calls == 8);
    check_clustering_contract(g, cl);
}

TEST_CASE("composed variant keeps the full coverage bound") {
    SplitRng rng(55);
    WeightedGraph g = bf::rand_graph(rng, 90, 200, 1);
    StrongClustering cl = strong_cluster_composed(g);
    int64_t covered = 0;
    for (const auto& c : cl.clusters) covered += (int64_t)c.nodes.size();
    CHECK(3 * covered >= 2 * (int64_t)g.n); // implies the composed n/3 bound
    check_clustering_contract(g, cl);
}

TEST_CASE("difference values change by at most 2 across an edge") {
    // The separation argument rests on capped difference values being
    // 2-Lipschitz along edges; recompute them directly for phase 0.
    SplitRng rng(77);
    for (int it = 0; it < 20; ++it) {
        int n = 2 + (int)rng.below(60);
        WeightedGraph g = bf::rand_graph(rng, n, (int)rng.below(80), 1);
        int b = g.bits;
        int64_t cap = 6 * b;
        std::vector<char> alive(g.n, 1);
        std::vector<int64_t> dR(g.n, cap), dB(g.n, cap);
        for (NodeId s = 0; s < g.n; ++s) {
            auto d = hop_bfs(g, alive, s);
            bool red = (g.ids[s] >> (b - 1)) & 1;
            for (NodeId v = 0; v < g.n; ++v) {
                if (d[v] < 0) continue;
                auto& tgt = red ? dR[v] : dB[v];
                tgt = std::min(tgt, std::min(d[v], cap));
            }
        }
        for (const Edge& e : g.edges) {
            int64_t du = dR[e.u] - dB[e.u], dv = dR[e.v] - dB[e.v];
            CHECK(std::abs(du - dv) <= 2);
        }
    }
}
