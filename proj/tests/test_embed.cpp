#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "bruteforce.hpp"
#include "lddkit/embed.hpp"
#include "lddkit/errors.hpp"

using namespace lddkit;

namespace {

Int norm1(const Embedding& E, NodeId u, NodeId v) {
    Int norm = 0;
    for (int c = 0; c < E.dims; ++c) {
        i128 diff = E.x[u][c] - E.x[v][c];
        if (diff < 0) diff = -diff;
        norm += mpz_of_i128(diff);
    }
    return norm;
}

// Recompute one coordinate from its partition data alone: multi-source
// Bellman-Ford from the zero-bit side of the labels.
std::vector<i128> coordinate_oracle(const Subgraph& G, const EmbedPartition& part, int bit) {
    std::vector<NodeId> S;
    for (NodeId v = 0; v < G.g->n; ++v) {
        if (!G.has_node(v)) continue;
        if (!part.label[part.cluster_of[v]][bit]) S.push_back(v);
    }
    if (S.empty()) return std::vector<i128>(G.g->n, 0);
    return bf::int_dist(G, S);
}

} // namespace

TEST_CASE("codes verify their declared distances") {
    ClusterCode raw = raw_id_code(3);
    CHECK(raw.m == 3);
    CHECK(raw.distance == 1);
    ClusterCode rep = repetition_code(3);
    CHECK(rep.m == 30);
    CHECK(rep.distance == 10);
    for (uint64_t a = 0; a < 8; ++a)
        for (uint64_t b = a + 1; b < 8; ++b) {
            std::vector<char> ra = raw.encode(a), rb = raw.encode(b);
            int wraw = 0;
            for (int p = 0; p < raw.m; ++p) wraw += ra[p] != rb[p];
            CHECK(wraw >= raw.distance);
            std::vector<char> pa = rep.encode(a), pb = rep.encode(b);
            int wrep = 0;
            for (int p = 0; p < rep.m; ++p) wrep += pa[p] != pb[p];
            CHECK(wrep >= rep.distance);
        }

    ClusterCode over = raw_id_code(2);
    over.distance = 2; // single-bit identifiers differ in one position only
    CHECK_THROWS_AS(verify_code(over), GuaranteeError);

    ClusterCode constant;
    constant.b = 2;
    constant.m = 4;
    constant.distance = 1;
    constant.encode = [](uint64_t) { return std::vector<char>(4, 1); };
    CHECK_THROWS_AS(verify_code(constant), GuaranteeError);
}

TEST_CASE("a single node embeds to the origin") {
    WeightedGraph g;
    g.n = 1;
    g.ids = {0};
    g.finalize();
    Subgraph sg(g);
    Embedding E = l1_embed(sg);
    CHECK(E.dims == (int)E.scales.size() * E.t * E.code.m);
    CHECK(E.dims > 0);
    CHECK((int)E.provenance.size() == E.dims);
    for (int c = 0; c < E.dims; ++c) CHECK(E.x[0][c] == 0);

    DistortionReport rep = distortion_report(sg, E);
    CHECK(rep.pairs_tested == 0);
    CHECK(rep.exact);
}

TEST_CASE("two nodes split at the scale bracketing their distance") {
    for (i128 len : {(i128)1, (i128)7, (i128)64}) {
        WeightedGraph g;
        g.n = 2;
        g.ids = {0, 1};
        g.edges.push_back({0, 1, len});
        g.finalize();
        Subgraph sg(g);
        Embedding E = l1_embed(sg);
        Int norm = norm1(E, 0, 1);
        CHECK(Int(2) * norm >= mpz_of_i128(len));

        DistortionReport rep = distortion_report(sg, E);
        CHECK(rep.exact);
        CHECK(rep.pairs_tested == 1);
        CHECK(rep.max_expansion <= Rat(E.dims));
        CHECK(rep.max_contraction <= Rat(2));
        CHECK(rep.max_expansion == Rat(norm) / rat_of_i128(len));
    }
}

TEST_CASE("coordinates are Lipschitz and norms bounded by the dimension") {
    SplitRng rng(73737);
    for (int it = 0; it < 5; ++it) {
        int n = 2 + (int)rng.below(9);
        WeightedGraph g = bf::rand_graph(rng, n, (int)rng.below(6), 1 + (int64_t)rng.below(6));
        if (it % 2) bf::shuffle_ids(g, rng);
        Subgraph sg(g);
        CAPTURE(it);
        CAPTURE(n);

        Embedding E = l1_embed(sg);
        std::vector<std::vector<i128>> d = bf::apsp(sg);
        for (NodeId u = 0; u < g.n; ++u)
            for (NodeId v = u + 1; v < g.n; ++v)
                CHECK(norm1(E, u, v) <= Int(E.dims) * mpz_of_i128(d[u][v]));

        DistortionReport rep = distortion_report(sg, E);
        CHECK(rep.exact);
        CHECK(rep.pairs_tested == (long long)n * (n - 1) / 2);
        CHECK(rep.max_expansion <= Rat(E.dims));
        CHECK(rep.max_contraction >= Rat(1));

        // Labels of distinct clusters sharing an edge differ enough bits.
        for (const EmbedScale& sc : E.scales)
            for (const EmbedPartition& part : sc.parts)
                for (EdgeId e = 0; e < (EdgeId)g.edges.size(); ++e) {
                    NodeId u = g.edges[e].u, v = g.edges[e].v;
                    if (part.cluster_of[u] == part.cluster_of[v]) continue;
                    int diff = 0;
                    for (int p = 0; p < E.code.m; ++p)
                        diff += part.label[part.cluster_of[u]][p] !=
                                part.label[part.cluster_of[v]][p];
                    CHECK(diff >= E.code.distance);
                }

        Embedding again = l1_embed(sg);
        CHECK(again.dims == E.dims);
        CHECK(again.x == E.x);
    }
}

TEST_CASE("a unit path rebuilds every coordinate from first principles") {
    WeightedGraph g;
    g.n = 3;
    g.ids = {0, 1, 2};
    g.edges.push_back({0, 1, 1});
    g.edges.push_back({1, 2, 1});
    g.finalize();
    Subgraph sg(g);
    Embedding E = l1_embed(sg);

    for (const EmbedScale& sc : E.scales)
        for (const EmbedPartition& part : sc.parts)
            for (int p = 0; p < E.code.m; ++p) {
                std::vector<i128> phi = coordinate_oracle(sg, part, p);
                for (NodeId v = 0; v < g.n; ++v) CHECK(E.x[v][part.coord_base + p] == phi[v]);
            }

    DistortionReport rep = distortion_report(sg, E);
    CHECK(rep.exact);
    CHECK(rep.pairs_tested == 3);
    std::vector<std::vector<i128>> d = bf::apsp(sg);
    Rat expansion(0), contraction(0);
    for (NodeId u = 0; u < 3; ++u)
        for (NodeId v = u + 1; v < 3; ++v) {
            Int norm = norm1(E, u, v);
            expansion = std::max(expansion, Rat(Rat(norm) / rat_of_i128(d[u][v])));
            contraction = std::max(contraction, Rat(rat_of_i128(d[u][v]) / Rat(norm)));
        }
    CHECK(rep.max_expansion == expansion);
    CHECK(rep.max_contraction == contraction);
}

TEST_CASE("the repetition code powers the distortion certificate") {
    WeightedGraph g;
    g.n = 3;
    g.ids = {0, 1, 2};
    g.edges.push_back({0, 1, 2});
    g.edges.push_back({1, 2, 3});
    g.finalize();
    Subgraph sg(g);
    ClusterCode code = repetition_code(g.bits);
    EmbedOptions opt;
    opt.code = &code;
    Embedding E = l1_embed(sg, opt);
    CHECK(E.code.m == 10 * g.bits);
    CHECK(E.code.distance == 10);
    CHECK(E.dims == (int)E.scales.size() * E.t * E.code.m);
    DistortionReport rep = distortion_report(sg, E);
    CHECK(rep.pairs_tested == 3);
}

TEST_CASE("invalid embedding inputs are rejected") {
    WeightedGraph two;
    two.n = 2;
    two.ids = {0, 1};
    two.finalize();
    Subgraph disconnected(two);
    CHECK_THROWS_AS(l1_embed(disconnected), PreconditionError);

    WeightedGraph zedge;
    zedge.n = 2;
    zedge.ids = {0, 1};
    zedge.edges.push_back({0, 1, 0});
    zedge.finalize();
    Subgraph zsg(zedge);
    CHECK_THROWS_AS(l1_embed(zsg), PreconditionError);

    WeightedGraph wide;
    wide.n = 2;
    wide.ids = {0, 3};
    wide.edges.push_back({0, 1, 1});
    wide.finalize();
    Subgraph wsg(wide);
    ClusterCode narrow = raw_id_code(1);
    EmbedOptions opt;
    opt.code = &narrow;
    CHECK_THROWS_AS(l1_embed(wsg, opt), PreconditionError);

    WeightedGraph one;
    one.n = 1;
    one.ids = {0};
    one.finalize();
    Subgraph empty(one);
    empty.node_on.assign(1, 0);
    CHECK_THROWS_AS(l1_embed(empty), PreconditionError);
}
