#pragma once

#include <vector>

#include "lddkit/graph.hpp"

namespace lddkit {

// Weighted forest F contained in a host graph, rooted at a subset of the
// source set handed to the distance oracle. dF carries exact distances to
// the root measured with true edge lengths.
struct RootedForest {
    const WeightedGraph* g = nullptr;
    std::vector<char> member;      // V(F)
    std::vector<NodeId> parent;    // NO_NODE for roots and non-members
    std::vector<EdgeId> link_edge; // edge to parent, -1 where no parent
    std::vector<NodeId> root;      // root_F(v), NO_NODE for non-members
    std::vector<i128> dF;          // 0 for roots
    std::vector<NodeId> roots;     // S', ascending node index

    bool in(NodeId v) const { return v >= 0 && member[v] != 0; }

    // Members ordered parents-before-children (deterministic).
    std::vector<NodeId> topo_order() const;

    // Throws GuaranteeError if parent links cycle, dF is inconsistent with
    // edge lengths, or a member's root is not a listed root.
    void validate() const;
};

enum class AggOp { Sum, Min };

// Per-node aggregate over strict ancestors A(v) and strict descendants D(v).
// v itself is excluded from both by convention; the empty min is INF128.
struct AggResult {
    std::vector<i128> anc;
    std::vector<i128> desc;
};

AggResult forest_aggregate(const RootedForest& F, const std::vector<i128>& x, AggOp op);

} // namespace lddkit
