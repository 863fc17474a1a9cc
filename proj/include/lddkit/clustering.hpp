#pragma once

#include <cstdint>
#include <vector>

#include "lddkit/blur.hpp"
#include "lddkit/graph.hpp"
#include "lddkit/oracles.hpp"
#include "lddkit/rng.hpp"

namespace lddkit {

// ---------------------------------------------------------------------------
// Red/blue split.
//
// Input: a subgraph H whose terminals Q = Q_red | Q_blue carry delays del with
// d_{H,del}(Q, v) <= R for every active v, per-node radii r and weights mu,
// and a cut scale D > 0.  The split peels one color at a time: it grows a
// distance forest from Q, blurs the set of one color's domain at scale D, cuts
// the blurred boundary out, and recurses on the rest with re-rooted terminals
// (the nodes whose forest parent was cut away adopt the cut color; surviving
// roots keep the other color).  Recursion depth: `depth` levels in randomized
// mode (callers pass ceil(log2 D)); deterministic mode derives
// depth = 1 + floor(log2 sum_v mu(v) r(v)) (0 when the sum is 0) per level.
//
// Output guarantees, all exact:
//  * separation: no connected component of h_prime meets both colors'
//    surviving terminals;
//  * ruling: d_{h_prime,del'}(Q', v) <= (1+eps)^{2(depth+1)} d_{H,del}(Q, v)
//    + 3D * sum_{j=1..depth} (1+eps)^{2j}, where del' restricts del to Q';
//  * good nodes: v_good[v] implies B_{h_prime}(v, r(v)) = B_H(v, r(v)), with
//    every distance inside the ball preserved;
//  * bad mass: deterministically
//      sum_{bad} mu r_weighted: mu(V_bad) <= (1 - 2^-depth) * 20 / (D * (1-eps)^E)
//                               * sum_v mu(v) r(v)  with E = max(0, floor(log2 2D));
//    in randomized mode, per node,
//      Pr[v in V_bad] <= 2^-depth [r(v) > 0] + (1 - 2^-depth) * 40 r(v) / (D (1-eps)^E).
//
// eps < 0 selects the default 1/ceil(log2 max(n, 4)); valid range [0, 1/2].
// ---------------------------------------------------------------------------

struct RbOptions {
    Rat eps = Rat(-1);   // < 0 -> default_eps_log(active node count)
    DistOptions dist;    // forwarded to every distance-forest call
    int depth = -1;      // randomized mode only; deterministic mode derives it
};

struct RbSplitResult {
    std::vector<char> qr_prime, qb_prime;  // surviving terminals by color
    Subgraph h_prime;                      // same node set, pruned edge set
    std::vector<char> v_good, v_bad;       // partition of the active nodes
    int depth = 0;                         // levels actually used at top call
};

RbSplitResult rb_split(const Subgraph& H, const std::vector<i128>& r, const std::vector<i128>& mu,
                       const std::vector<char>& q_red, const std::vector<char>& q_blue,
                       const std::vector<Rat>& del, const Rat& R, const Rat& D, const Mode& mode,
                       const RbOptions& opt = {}, OracleCtx* ctx = nullptr);

// ---------------------------------------------------------------------------
// Terminal clustering (iterated red/blue split over identifier bits).
//
// Runs one rb_split per identifier bit, most significant first; phase i
// separates terminals whose ids differ in that bit, so after all b phases
// every component of the final graph holds exactly one terminal and every
// node is within the composed ruling bound r_bound of its component's
// terminal.  Node set never shrinks: only edges are pruned.
// ---------------------------------------------------------------------------

struct SteroidsPhase {
    int bit = 0;        // id bit split in this phase (b-1-i for phase i)
    int depth = 0;      // rb_split recursion depth used
    Rat r_bound;        // ruling bound that holds after this phase
    std::vector<char> edge_on;  // surviving edge mask after this phase
};

struct SteroidsOptions {
    Rat eps = Rat(-1);  // < 0 -> default_eps_log2(active node count)
    DistOptions dist;
    int depth = -1;     // randomized rb depth override; < 0 -> ceil(log2 D)
};

struct SteroidsResult {
    std::vector<std::vector<NodeId>> clusters;  // components of the final graph
    std::vector<NodeId> center;                 // the unique terminal per cluster
    std::vector<int32_t> cluster_of;            // -1 for inactive nodes
    std::vector<char> q_prime;                  // surviving terminal mask
    std::vector<char> v_good, v_bad;
    Subgraph h_final;
    Rat r_bound;                 // composed ruling bound (certificate)
    std::vector<Rat> dist_cert;  // d_{h_final,del}(Q', v) for active v, else 0
    std::vector<SteroidsPhase> phases;
};

SteroidsResult steroids(const Subgraph& H, const std::vector<i128>& r, const std::vector<i128>& mu,
                        const std::vector<NodeId>& q, const std::vector<Rat>& del, const Rat& R,
                        const Rat& D, const Mode& mode, const SteroidsOptions& opt = {},
                        OracleCtx* ctx = nullptr);

// ---------------------------------------------------------------------------
// Padded partition: terminal clustering with every node as its own terminal,
// zero delays, radii r = D and the caller's weights.  A good node has its
// whole D-ball inside its own cluster ("padded").  Cluster diameter is at
// most diameter_bound = 2 * r_bound, reported exactly.  The internal scale is
// kPaddedPartitionScale * ceil(log2 max(n,4)) * D (see constants.hpp).
// ---------------------------------------------------------------------------

struct PaddedOptions {
    Rat eps = Rat(-1);  // < 0 -> default_eps_log2(active node count)
    DistOptions dist;
    int scale = 0;      // <= 0 -> kPaddedPartitionScale
};

struct PaddedPartition {
    std::vector<std::vector<NodeId>> clusters;
    std::vector<NodeId> center;
    std::vector<int32_t> cluster_of;
    std::vector<char> v_good, v_bad;  // good <=> certified padded
    Rat diameter_bound;
    int depth = 0;  // max rb depth across phases (audit hook)
};

PaddedPartition padded_partition(const Subgraph& G, i128 D, const std::vector<i128>& mu,
                                 const Mode& mode, const PaddedOptions& opt = {},
                                 OracleCtx* ctx = nullptr);

// ---------------------------------------------------------------------------
// Sparse cover: t = kCoverRoundFactor * ceil(log2 max(n,4)) padded partitions
// with multiplicative weights; a node that comes out bad in a round has its
// weight doubled for the next one.  padded[i][v] records whether B_G(v, D)
// lies inside v's round-i cluster (checked directly; implied by v_good but
// can hold without certification).  Guarantees, as a hard assertion, that
// every node is padded in at least ceil(2t/3) of the t partitions.
// ---------------------------------------------------------------------------

struct CoverOptions {
    Rat eps = Rat(-1);
    DistOptions dist;
    int scale = 0;   // forwarded to padded_partition
    int rounds = 0;  // <= 0 -> kCoverRoundFactor * ceil(log2 max(n,4))
};

struct SparseCover {
    std::vector<PaddedPartition> rounds;
    std::vector<std::vector<char>> padded;  // per round, per node
    std::vector<int32_t> padded_count;      // per node; >= ceil(2t/3) for active
    int t = 0;
};

SparseCover sparse_cover(const Subgraph& G, i128 D, const Mode& mode,
                         const CoverOptions& opt = {}, OracleCtx* ctx = nullptr);

// ---------------------------------------------------------------------------
// Edge cutting: cluster around delayed terminals while charging cut edges to
// their weight.  Works on the subdivision of H (one midpoint node per edge,
// radius and weight of a midpoint equal to the edge's length and weight), so
// that a cut edge always has a bad midpoint.  Guarantees:
//  * every cluster C holds exactly one surviving terminal q'_C in V(H);
//  * d_{H[C],del}(q'_C, v) <= d_{H,del}(Q, v) + eps * R for every v in C;
//  * e_bad is exactly the set of inter-cluster edges, each of which has a bad
//    midpoint, so mu(e_bad) inherits the terminal-clustering bad-mass budget.
// Internal scales: D = eps * R / (kEdgeCutC1Den * L^2) and
// eps' = eps / (kEdgeCutC2Den * L^2) with L = ceil(log2 max(n', 4)) on the
// subdivided size n'.
// ---------------------------------------------------------------------------

struct EdgeCutOptions {
    DistOptions dist;
    int depth = -1;  // randomized rb depth override, forwarded
};

struct EdgeCutResult {
    std::vector<std::vector<NodeId>> clusters;  // original nodes only
    std::vector<NodeId> center;
    std::vector<int32_t> cluster_of;            // over V(H); -1 inactive
    std::vector<char> q_prime;
    std::vector<EdgeId> e_bad;                  // inter-cluster edges
    std::vector<Rat> dist_cert;                 // d_{H[C],del}(q'_C, v) bound per node
};

EdgeCutResult edge_cutting(const Subgraph& H, const std::vector<i128>& mu_e,
                           const std::vector<NodeId>& q, const std::vector<Rat>& del, const Rat& R,
                           const Rat& eps, const Mode& mode, const EdgeCutOptions& opt = {},
                           OracleCtx* ctx = nullptr);

}  // namespace lddkit
