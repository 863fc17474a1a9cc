#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>

#include "bruteforce.hpp"
#include "doctest.h"
#include "lddkit/errors.hpp"
#include "lddkit/graph.hpp"

using namespace lddkit;

TEST_CASE("parse minimal graph") {
    WeightedGraph g = parse_graph("p 3 2\ne 0 1 5\ne 1 2 7\n", "t");
    CHECK(g.n == 3);
    CHECK(g.edges.size() == 2);
    CHECK(g.ids[0] == 0);
    CHECK(g.ids[2] == 2);
    CHECK(g.bits == 2);
    CHECK(g.edges[0].u == 0);
    CHECK(g.edges[0].v == 1);
    CHECK(g.edges[0].len == 5);
    CHECK(g.find_edge(1, 0) == 0);
    CHECK(g.find_edge(2, 1) == 1);
    CHECK(g.find_edge(0, 2) == -1);
}

TEST_CASE("parse with explicit ids, comments, canonical order") {
    WeightedGraph g = parse_graph(
        "# a comment\n"
        "p 2 1\n"
        "v 0 6\n"
        "v 1 9\n"
        "\n"
        "e 1 0 3\n",
        "t");
    CHECK(g.ids[0] == 6);
    CHECK(g.ids[1] == 9);
    CHECK(g.bits == 4);
    CHECK(g.edges[0].u == 0); // endpoints swapped into u < v
    CHECK(g.edges[0].v == 1);
}

TEST_CASE("parallel edges collapse to the minimum length") {
    WeightedGraph g = parse_graph("p 2 3\ne 0 1 9\ne 1 0 4\ne 0 1 6\n", "t");
    CHECK(g.edges.size() == 1);
    CHECK(g.edges[0].len == 4);
}

TEST_CASE("parse errors carry line numbers") {
    CHECK_THROWS_AS(parse_graph("e 0 1 2\n", "t"), ParseError);            // no header
    CHECK_THROWS_AS(parse_graph("p 2 1\np 2 1\ne 0 1 1\n", "t"), ParseError);
    CHECK_THROWS_AS(parse_graph("p 2 1\ne 0 0 1\n", "t"), ParseError);     // self-loop
    CHECK_THROWS_AS(parse_graph("p 2 1\ne 0 1 -1\n", "t"), ParseError);    // negative
    CHECK_THROWS_AS(parse_graph("p 2 1\ne 0 2 1\n", "t"), ParseError);     // bad index
    CHECK_THROWS_AS(parse_graph("p 2 1\ne 0 1 1 junk\n", "t"), ParseError);
    CHECK_THROWS_AS(parse_graph("p 2 2\ne 0 1 1\n", "t"), ParseError);     // m mismatch
    CHECK_THROWS_AS(parse_graph("p 2 1\nv 0 3\nv 1 3\ne 0 1 1\n", "t"), ParseError);
    CHECK_THROWS_AS(parse_graph("p 2 1\ne 0 1 100\n", "t"), ParseError);   // > n^4
    CHECK_THROWS_AS(parse_graph("p 2 1\nq 0 1\ne 0 1 1\n", "t"), ParseError);
    try {
        parse_graph("p 2 1\ne 0 0 1\n", "t");
    } catch (const ParseError& ex) {
        CHECK(std::string(ex.what()).find(":2") != std::string::npos);
    }
}

TEST_CASE("save/parse round trip preserves everything") {
    SplitRng rng(7);
    for (int it = 0; it < 20; ++it) {
        WeightedGraph g = bf::rand_graph(rng, 2 + (int)rng.below(30), (int)rng.below(40), 50);
        bf::shuffle_ids(g, rng);
        WeightedGraph h = parse_graph(save_graph(g), "t");
        REQUIRE(h.n == g.n);
        REQUIRE(h.edges.size() == g.edges.size());
        CHECK(h.ids == g.ids);
        CHECK(h.bits == g.bits);
        for (size_t e = 0; e < g.edges.size(); ++e) {
            CHECK(h.edges[e].u == g.edges[e].u);
            CHECK(h.edges[e].v == g.edges[e].v);
            CHECK(h.edges[e].len == g.edges[e].len);
        }
    }
}

TEST_CASE("write/load round trip through a file") {
    WeightedGraph g = parse_graph("p 3 2\nv 0 4\nv 1 2\nv 2 1\ne 0 1 5\ne 1 2 7\n", "t");
    std::string path = "roundtrip_tmp.graph";
    write_graph(g, path);
    WeightedGraph h = load_graph(path);
    std::remove(path.c_str());
    CHECK(h.n == g.n);
    CHECK(h.ids == g.ids);
    CHECK(save_graph(h) == save_graph(g));
    CHECK_THROWS_AS(load_graph("does_not_exist.graph"), IoError);
}

TEST_CASE("subdivision replaces each edge by a fresh node") {
    // Larger identifier on the smaller index exercises the id-based side rule.
    WeightedGraph g = parse_graph("p 2 1\nv 0 1\nv 1 0\ne 0 1 5\n", "t");
    Subdivision sd = subdivide(g);
    const WeightedGraph& h = sd.graph;
    REQUIRE(h.n == 3);
    REQUIRE(sd.edge_node.size() == 1);
    NodeId ve = sd.edge_node[0];
    CHECK(ve == 2);
    CHECK(h.ids[ve] >= (uint64_t(1) << g.bits)); // fresh id above original range
    // Zero-length side attaches to the endpoint with the smaller identifier.
    EdgeId zero_side = h.find_edge(1, ve);
    EdgeId len_side = h.find_edge(0, ve);
    REQUIRE(zero_side >= 0);
    REQUIRE(len_side >= 0);
    CHECK(h.edges[zero_side].len == 0);
    CHECK(h.edges[len_side].len == 5);
    CHECK(h.find_edge(0, 1) == -1);

    // Distances are preserved between original nodes.
    SplitRng rng(11);
    for (int it = 0; it < 10; ++it) {
        WeightedGraph r = bf::rand_graph(rng, 2 + (int)rng.below(14), (int)rng.below(20), 9);
        Subdivision s2 = subdivide(r);
        auto dg = bf::apsp(Subgraph(r));
        auto dh = bf::apsp(Subgraph(s2.graph));
        for (NodeId u = 0; u < r.n; ++u)
            for (NodeId v = 0; v < r.n; ++v) CHECK(dg[u][v] == dh[u][v]);
    }
}

TEST_CASE("components numbered by smallest node index") {
    WeightedGraph g = parse_graph("p 6 4\ne 0 1 1\ne 1 2 1\ne 3 4 1\ne 4 5 1\n", "t");
    Subgraph sg(g);
    int32_t cnt = 0;
    auto comp = components(sg, &cnt);
    CHECK(cnt == 2);
    CHECK(comp[0] == 0);
    CHECK(comp[2] == 0);
    CHECK(comp[3] == 1);
    CHECK(comp[5] == 1);

    sg.node_on[1] = 0; // masking a cut node splits the first component
    comp = components(sg, &cnt);
    CHECK(cnt == 3);
    CHECK(comp[1] == -1);
    CHECK(comp[0] == 0);
    CHECK(comp[2] == 1);
    CHECK(comp[3] == 2);
}

TEST_CASE("subgraph restriction and edge activity") {
    WeightedGraph g = parse_graph("p 3 3\ne 0 1 1\ne 1 2 1\ne 0 2 1\n", "t");
    Subgraph sg(g);
    CHECK(sg.count_nodes() == 3);
    std::vector<char> keep = {1, 0, 1};
    Subgraph r = sg.restrict_nodes(keep);
    CHECK(r.count_nodes() == 2);
    CHECK(r.node_list() == std::vector<NodeId>{0, 2});
    CHECK(!r.has_edge(g.find_edge(0, 1)));
    CHECK(r.has_edge(g.find_edge(0, 2)));
    // Edge masks compose with node masks.
    r.edge_on[g.find_edge(0, 2)] = 0;
    CHECK(!r.has_edge(g.find_edge(0, 2)));
}
