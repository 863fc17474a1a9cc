#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lddkit/int128.hpp"
#include "lddkit/rational.hpp"

namespace lddkit {

using NodeId = int32_t;
using EdgeId = int32_t;

constexpr NodeId NO_NODE = -1;

struct Edge {
    NodeId u, v; // canonical: u < v
    i128 len;    // nonnegative integer
};

// Undirected weighted graph with nonnegative integer lengths and unique
// b-bit node identifiers. Node indices are dense 0..n-1; identifiers are
// separate and drive every tie-break in the library.
struct WeightedGraph {
    int32_t n = 0;
    std::vector<uint64_t> ids; // ids[v] < 2^bits, pairwise distinct
    int bits = 1;
    std::vector<Edge> edges;

    // CSR adjacency over edge indices; built by finalize().
    std::vector<int32_t> adj_off;
    std::vector<EdgeId> adj_edge;

    void finalize(); // sort+dedupe edges, recompute bits and adjacency
    NodeId other(EdgeId e, NodeId x) const {
        const Edge& ed = edges[e];
        return ed.u == x ? ed.v : ed.u;
    }
    EdgeId find_edge(NodeId a, NodeId b) const; // -1 if absent
    uint64_t max_len_bound() const;             // n^C, the legal length ceiling
};

// Induced subgraph as masks over a base graph. An edge is active iff its own
// mask bit and both endpoint masks are set. Node indices stay global, so
// distances, ids and attribute vectors need no translation.
struct Subgraph {
    const WeightedGraph* g = nullptr;
    std::vector<char> node_on;
    std::vector<char> edge_on;

    Subgraph() = default;
    explicit Subgraph(const WeightedGraph& base)
        : g(&base), node_on(base.n, 1), edge_on(base.edges.size(), 1) {}

    bool has_node(NodeId v) const { return node_on[v] != 0; }
    bool has_edge(EdgeId e) const {
        return edge_on[e] && node_on[g->edges[e].u] && node_on[g->edges[e].v];
    }
    int32_t count_nodes() const {
        int32_t c = 0;
        for (char b : node_on) c += b != 0;
        return c;
    }
    // Restrict to the given node set (keeps the current edge mask).
    Subgraph restrict_nodes(const std::vector<char>& keep) const;
    std::vector<NodeId> node_list() const;
};

// Per-node annotations. Radii and weights are nonnegative integers; delays
// are exact rationals because recursive clustering composes (1+eps) factors.
struct NodeAttrs {
    std::vector<i128> r;
    std::vector<i128> mu;
};

struct ParsedGraph {
    WeightedGraph graph;
    bool had_id_lines = false;
};

WeightedGraph load_graph(const std::string& path);
WeightedGraph parse_graph(const std::string& text, const std::string& origin);
std::string save_graph(const WeightedGraph& g);
void write_graph(const WeightedGraph& g, const std::string& path);

// Replaces every edge e={u,v} by a fresh node v_e with len(u', v_e)=0 and
// len(v_e, v')=len(e), u' being the endpoint with the smaller identifier.
// Original nodes keep their indices; v_e gets index n+e and a fresh id
// above the original id range.
struct Subdivision {
    WeightedGraph graph;
    std::vector<NodeId> edge_node; // per original edge index
};
Subdivision subdivide(const WeightedGraph& g);

// Connected components of the active part; inactive nodes get -1.
// Components are numbered in increasing order of their smallest node index.
std::vector<int32_t> components(const Subgraph& sg, int32_t* count = nullptr);

} // namespace lddkit
