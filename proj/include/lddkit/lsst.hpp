#pragma once

#include <vector>

#include "lddkit/graph.hpp"
#include "lddkit/int128.hpp"
#include "lddkit/oracles.hpp"
#include "lddkit/rational.hpp"
#include "lddkit/rng.hpp"

namespace lddkit {

// One input part refined into a star: parts[0] is the core holding the input
// root, and parts[j] (j >= 1) hangs off the core node bridge_y[j-1] through
// the edge bridges[j-1], whose far endpoint is that piece's root roots[j].
struct StarPart {
    std::vector<std::vector<NodeId>> parts;
    std::vector<NodeId> roots;
    std::vector<EdgeId> bridges;
    std::vector<NodeId> bridge_y;
};

struct StarOptions {
    DistOptions dist;
};

struct StarResult {
    std::vector<StarPart> stars;  // aligned with the input parts
    std::vector<char> core;       // union of all the cores
    std::vector<EdgeId> e_cut;    // in-part edges severed by the refinement
    Int cut_weight;               // total importance of e_cut (certificate)
};

// Refine every rooted part (whose rooted radius inside its own induced
// subgraph must be at most R) into a core plus satellites so that, exactly:
//   1. every piece has rooted radius <= (3/4) R in its induced subgraph,
//   2. core distances from the root stay within (1+eps) of the whole-part
//      distances,
//   3. root -> bridge -> satellite detours stay within (1+eps) of the
//      whole-part distances.
// eps must lie in (0, 1/10]. The importances mu_e steer which edges are cut;
// cut_weight reports their total importance.
StarResult star_decompose(const Subgraph& G, const std::vector<std::vector<NodeId>>& parts,
                          const std::vector<NodeId>& roots, const Rat& R,
                          const std::vector<i128>& mu_e, const Rat& eps, const Mode& mode,
                          const StarOptions& opt = {}, OracleCtx* ctx = nullptr);

// A rooted spanning forest with one tree per input part.
struct LsstForest {
    std::vector<char> in_forest;  // edge mask over the base graph
    std::vector<EdgeId> edges;    // the same edges as a sorted list
    std::vector<NodeId> roots;    // aligned with the input parts
    std::vector<NodeId> parent;   // NO_NODE at roots and inactive nodes
    std::vector<EdgeId> link;     // edge to the parent (-1 at roots)
    std::vector<NodeId> root_of;  // tree root per active node
    std::vector<i128> depth_len;  // tree distance to the root
};

// Peel star decompositions level by level until the parts have zero
// diameter, then span them with zero-length shortest-path trees. Level j
// requires every part's rooted radius to be at most (4/3)^(j-2) and
// guarantees d_T(r_i, v) <= (1+eps)^j * d_{G[V_i]}(r_i, v), checked exactly
// at every level together with the edge-count identity |E(F)| = |V| - k.
LsstForest lsst_recurse(const Subgraph& G, const std::vector<std::vector<NodeId>>& parts,
                        const std::vector<NodeId>& roots, int level,
                        const std::vector<i128>& mu_e, const Rat& eps, const Mode& mode,
                        const StarOptions& opt = {}, OracleCtx* ctx = nullptr);

struct StretchReport {
    Rat tree_total;    // sum over edges of mu(e) * d_T(u, v)
    Rat edge_total;    // sum over edges of mu(e) * l(e)
    Rat ratio;         // tree_total / edge_total, zero when edge_total is zero
    Rat budget;        // documented comparison budget per unit of edge_total
    bool within_budget = false;
    bool diam_exact = true;
    i128 diameter = 0;  // exact diameter, or a double-sweep lower bound
    int level = 0;      // top recursion level
};

struct LsstResult {
    LsstForest forest;
    StretchReport report;
};

struct LsstOptions {
    Rat eps = Rat(-1);  // default: min(1/10, 1/ceil(log2 n))
    DistOptions dist;
};

// Spanning tree of a connected graph, rooted at the first active node, with
// an average-stretch report. The ratio is compared against the documented
// budget kLsstBudgetK * ceil(log2 n)^5; the comparison is reported, while
// the per-level inequalities above are hard guarantees.
LsstResult lsst(const Subgraph& G, const std::vector<i128>& mu_e, const Mode& mode,
                const LsstOptions& opt = {}, OracleCtx* ctx = nullptr);

}  // namespace lddkit
