#pragma once

#include <vector>

#include "lddkit/graph.hpp"
#include "lddkit/rational.hpp"

namespace lddkit {

// Exact delayed multi-source shortest paths:
//   dist(v) = min over q in S of del(q) + d(q, v),
// truncated at a cap. Ties are broken deterministically: smaller source
// identifier first, then smaller predecessor identifier on the last hop.
struct DistResult {
    std::vector<i128> dist;  // INF128 when not reached within the cap
    std::vector<NodeId> pred; // NO_NODE for sources and unreached nodes
    std::vector<NodeId> root; // the winning source, NO_NODE if unreached

    bool reached(NodeId v) const { return root[v] != NO_NODE; }
};

// del == nullptr means all delays zero. cap == INF128 means no cap.
DistResult dijkstra_multi(const Subgraph& g, const std::vector<NodeId>& S,
                          const std::vector<i128>* del, i128 cap);

// Same computation with rational delays and cap; used by the clustering
// recursion whose composed delays pick up (1+eps) factors. Internally scales
// by the common denominator and runs the integer engine when the scaled
// values fit 128 bits, otherwise an arbitrary-precision engine.
struct RatDistResult {
    std::vector<char> reached;
    std::vector<Rat> dist; // meaningful where reached
    std::vector<NodeId> pred;
    std::vector<NodeId> root;
};

// lens == nullptr uses the graph's own lengths; otherwise a per-edge
// override (the perturbed distance oracle reroutes via rounded lengths).
RatDistResult delayed_dist(const Subgraph& g, const std::vector<NodeId>& S,
                           const std::vector<Rat>* del, const Rat* cap,
                           const std::vector<Rat>* lens = nullptr);

} // namespace lddkit
