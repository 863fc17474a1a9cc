#pragma once

#include <cstdint>
#include <vector>

#include "lddkit/forest.hpp"
#include "lddkit/graph.hpp"
#include "lddkit/rational.hpp"

namespace lddkit {

// Per-run oracle accounting. Every report serializes one of these; the
// calling algorithm declares a distance-parameter bound and the run asserts
// max_distance_param never exceeded it.
struct OracleStats {
    int64_t dist_calls = 0;
    int64_t forest_agg_calls = 0;
    int64_t global_agg_calls = 0;
    int64_t pot_calls = 0;
    int64_t count_calls = 0;
    bool any_dist = false;
    Rat max_distance_param = 0;
    bool any_eps = false;
    Rat min_precision = 0;

    void note_dist(const Rat& D, const Rat& eps) {
        ++dist_calls;
        if (!any_dist || D > max_distance_param) max_distance_param = D;
        any_dist = true;
        note_eps(eps);
    }
    void note_eps(const Rat& eps) {
        if (!any_eps || eps < min_precision) min_precision = eps;
        any_eps = true;
    }
};

struct OracleCtx {
    OracleStats stats;
};

enum class DistMode { Exact, Perturbed };

struct DistOptions {
    DistMode mode = DistMode::Exact;
    uint64_t seed = 0; // perturbed mode only
};

// Truncated approximate distance forest (the O^Dist interface):
//   1. del(root_F(v)) + dF(v) <= (1+eps) * d_{H,del}(S,v) and <= (1+eps)*D
//   2. every v with d_{H,del}(S,v) <= D is a member.
// Exact mode returns the true shortest-path forest truncated at D, valid for
// every eps >= 0. Perturbed mode reroutes by stretching a seeded subset of
// edge lengths by (1+eps/3) to exercise callers' tolerance, and still
// satisfies both properties. del == nullptr means all-zero delays. D = 0 is
// accepted (the padded-partition path calls with a zero ruling bound).
RootedForest dist_oracle(const Subgraph& H, const std::vector<NodeId>& S,
                         const std::vector<Rat>* del, const Rat& D, const Rat& eps,
                         const DistOptions& opt = {}, OracleCtx* ctx = nullptr);

// Counted wrapper over forest_aggregate (the O^Forest-Agg interface).
AggResult forest_agg(const RootedForest& F, const std::vector<i128>& x, AggOp op,
                     OracleCtx* ctx = nullptr);

// Exact global sum (the O^Global-Agg interface).
i128 global_agg(const std::vector<i128>& x, OracleCtx* ctx = nullptr);

// Exact per-index sums over the active nodes; index k stands for j = 2k,
// j ranging over {0, 2, ..., 6b-2} (the O^count interface). Each x[v] must
// have exactly 3b entries.
std::vector<i128> count_oracle(const Subgraph& H, int b,
                               const std::vector<std::vector<char>>& x,
                               OracleCtx* ctx = nullptr);

// Exact potentials (the O^Pot interface): phi(v) = d_G(S, v), which meets
//   phi|S = 0, |phi(u)-phi(v)| <= d_G(u,v), (1+eps) phi(v) >= d_G(S,v)
// for every eps >= 0. Throws on empty S or a disconnected graph.
std::vector<i128> potential_oracle(const Subgraph& G, const std::vector<NodeId>& S,
                                   const Rat& eps, OracleCtx* ctx = nullptr);

} // namespace lddkit
