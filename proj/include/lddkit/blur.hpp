#pragma once

#include <vector>

#include "lddkit/graph.hpp"
#include "lddkit/oracles.hpp"
#include "lddkit/rng.hpp"

namespace lddkit {

// One recursion level: the distance budget in force, which branch was taken
// (1 keeps the current source set, 2 grows it to the half-budget
// neighborhood), and the two branch potentials that steer the deterministic
// choice.
struct BlurLevel {
    Rat D;
    int branch = 0;
    i128 phi1 = 0, phi2 = 0;
};

struct BlurResult {
    std::vector<char> s_sup; // final source superset, mask over nodes
    std::vector<char> v_bad; // nodes whose ball may straddle the boundary
    std::vector<BlurLevel> trace;
};

struct BlurOptions {
    Rat eps = Rat(-1);  // negative selects 1/ceil(log2 max(n,4)) for n active nodes
    DistOptions dist;   // distance-oracle flavor for every call
    bool audit = false; // exact per-level re-check of the handoff invariant (slow)
};

// Ball-boundary blurring. Starting from S, each level either keeps the
// current set or grows it to the D/2-neighborhood reported by the distance
// oracle, then shrinks the budget to (1-eps)D/2, until the budget reaches 1.
// Deterministic mode takes the branch with the smaller potential (ties keep);
// randomized mode flips one fair coin per level (heads keeps). The returned
// s_sup contains S, every member is within induced distance D of S, and for
// every node outside v_bad the ball B(v, r(v)) lies entirely inside or
// entirely outside s_sup (for r(v) = 0 this needs positive edge lengths).
// The bad set is small: with E = max(0, floor(log2 2D)),
//   deterministic:  mu(v_bad) <= 10 / (D (1-eps)^E) * sum_v mu(v) r(v)
//   randomized:     Pr[v in v_bad] <= 20 r(v) / (D (1-eps)^E)  per node.
// Requires positive D, eps in [0, 1/2], nonnegative r and mu sized to the
// base graph, and S nonempty and active.
BlurResult blur(const Subgraph& G, const std::vector<NodeId>& S, const std::vector<i128>& r,
                const std::vector<i128>& mu, const Rat& D, const Mode& mode,
                const BlurOptions& opt = {}, OracleCtx* ctx = nullptr);

// Reference recursion with exact distances: one fair coin per level, heads
// keeps the set, tails grows it to the exact D/2-neighborhood, and the
// budget halves. Returns the final set, ascending.
std::vector<NodeId> exact_blur_coins(const Subgraph& G, const std::vector<NodeId>& S,
                                     const Rat& D, const CoinFn& coin);
std::vector<NodeId> exact_blur(const Subgraph& G, const std::vector<NodeId>& S, const Rat& D,
                               uint64_t seed);

// Edge variant: every edge is represented by its subdivision midpoint with
// radius len(e) and weight mu_e(e), while original nodes carry zero radius
// and weight. e_bad lists the edges whose midpoint lands in the bad set
// (ascending); zero-length edges never qualify. s_sup is over V(G).
struct BlurEdgeResult {
    std::vector<char> s_sup;
    std::vector<EdgeId> e_bad;
};

BlurEdgeResult blurry_edge(const WeightedGraph& G, const std::vector<NodeId>& S,
                           const std::vector<i128>& mu_e, const Rat& D, const Mode& mode,
                           const BlurOptions& opt = {}, OracleCtx* ctx = nullptr);

} // namespace lddkit
