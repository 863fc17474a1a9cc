#pragma once

#include <array>
#include <vector>

#include "lddkit/graph.hpp"
#include "lddkit/oracles.hpp"

namespace lddkit {

struct StrongCluster {
    NodeId center = NO_NODE;
    std::vector<NodeId> nodes;                     // ascending node index
    std::vector<std::array<NodeId, 2>> tree_edges; // (parent, child) of a BFS tree from center
    int64_t radius = 0;                            // center's hop eccentricity in the cluster
};

// 2-separated clustering of an unweighted graph: clusters are exactly the
// connected components of the surviving node set (so no edge joins two
// clusters), each holds a unique center within 6*b^2 hops of every member,
// and at least ceil(2n/3) nodes are clustered.
struct StrongClustering {
    std::vector<StrongCluster> clusters;
    std::vector<NodeId> unclustered;

    struct PhaseRecord {
        int jstar = 0;           // chosen even bucket index
        int64_t deleted = 0;     // nodes removed this phase
        int64_t centers_left = 0;
    };
    std::vector<PhaseRecord> phases; // one per identifier bit
};

// Runs b phases, splitting the surviving centers by identifier bit
// (most-significant first), removing the cheapest pair of distance-difference
// buckets each phase. Exactly one count_oracle call per phase. Inputs must
// be unweighted (every length 1) with pairwise-distinct identifiers.
StrongClustering strong_cluster(const WeightedGraph& G, OracleCtx* ctx = nullptr);

// Composition wrapper: the distributed pipeline first splits the graph into
// weak pre-clusters and runs the phase algorithm per pre-cluster, losing a
// factor 2 in coverage. Centrally the identity pre-clustering is valid, so
// this inherits the full ceil(2n/3) coverage, which implies the composed
// n/3 bound.
StrongClustering strong_cluster_composed(const WeightedGraph& G, OracleCtx* ctx = nullptr);

} // namespace lddkit
