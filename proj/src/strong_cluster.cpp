#include "lddkit/strong_cluster.hpp"

#include <algorithm>
#include <set>

#include "lddkit/dijkstra.hpp"
#include "lddkit/errors.hpp"

namespace lddkit {

namespace {

// min(d(S, v), cap) over the active nodes; cap where unreached or S empty.
std::vector<int64_t> capped_hops(const Subgraph& sg, const std::vector<NodeId>& S,
                                 int64_t cap) {
    std::vector<int64_t> out(sg.g->n, cap);
    if (S.empty()) return out;
    DistResult d = dijkstra_multi(sg, S, nullptr, (i128)cap);
    for (NodeId v = 0; v < sg.g->n; ++v)
        if (d.reached(v)) out[v] = (int64_t)d.dist[v];
    return out;
}

std::vector<NodeId> active_centers(const Subgraph& sg, const std::vector<char>& inQ) {
    std::vector<NodeId> q;
    for (NodeId v = 0; v < sg.g->n; ++v)
        if (sg.node_on[v] && inQ[v]) q.push_back(v);
    return q;
}

// The three per-phase invariants, checked after phase i completed (so the
// argument is the state indexed i+1 in the loop below):
//   1. centers sharing a component agree on the top `done` identifier bits,
//   2. every survivor is within 6*done*b hops of a center,
//   3. at most done*n/(3b) nodes were removed in total.
void audit_phase(const WeightedGraph& G, const Subgraph& sg, const std::vector<char>& inQ,
                 int done, int b) {
    int32_t comp_count = 0;
    std::vector<int32_t> comp = components(sg, &comp_count);
    std::vector<uint64_t> prefix(comp_count, 0);
    std::vector<char> seen(comp_count, 0);
    int shift = b - done;
    for (NodeId v = 0; v < G.n; ++v) {
        if (!sg.node_on[v] || !inQ[v]) continue;
        uint64_t p = G.ids[v] >> shift;
        if (!seen[comp[v]]) {
            seen[comp[v]] = 1;
            prefix[comp[v]] = p;
        }
        LDD_ENSURE(prefix[comp[v]] == p, "separation invariant violated");
    }

    std::vector<NodeId> q = active_centers(sg, inQ);
    int64_t bound = (int64_t)6 * done * b;
    std::vector<int64_t> dq = capped_hops(sg, q, bound + 1);
    for (NodeId v = 0; v < G.n; ++v)
        if (sg.node_on[v])
            LDD_ENSURE(dq[v] <= bound, "ruling invariant violated");

    // |V_i| >= n - i*n/(3b), compared exactly as 3b|V_i| >= 3bn - in.
    int64_t survivors = sg.count_nodes();
    LDD_ENSURE(3 * (int64_t)b * survivors >= (3 * (int64_t)b - done) * (int64_t)G.n,
               "deletion invariant violated");
}

} // namespace

StrongClustering strong_cluster(const WeightedGraph& G, OracleCtx* ctx) {
    for (const Edge& e : G.edges)
        LDD_REQUIRE(e.len == 1, "strong_cluster: input must be unweighted");
    std::set<uint64_t> uniq(G.ids.begin(), G.ids.end());
    LDD_REQUIRE((int64_t)uniq.size() == G.n, "strong_cluster: identifiers must be distinct");

    const int b = G.bits;
    const int64_t n = G.n;
    Subgraph cur(G);              // V_i
    std::vector<char> inQ(G.n, 1); // Q_i
    StrongClustering out;

    for (int i = 0; i < b; ++i) {
        const int bit = b - 1 - i; // most-significant bit first
        const int64_t cap = (int64_t)6 * (i + 1) * b;
        std::vector<NodeId> red, blue;
        for (NodeId v = 0; v < G.n; ++v) {
            if (!cur.node_on[v] || !inQ[v]) continue;
            ((G.ids[v] >> bit) & 1 ? red : blue).push_back(v);
        }
        std::vector<int64_t> dR = capped_hops(cur, red, cap);
        std::vector<int64_t> dB = capped_hops(cur, blue, cap);

        // Bucket K^j holds survivors with capped difference j; only
        // j in [0, 6b) matters and the capped difference equals the true
        // one on that range. x[v][k] marks removal candidacy for j* = 2k.
        std::vector<int64_t> diff(G.n, -1);
        std::vector<std::vector<char>> x(G.n, std::vector<char>(3 * b, 0));
        for (NodeId v = 0; v < G.n; ++v) {
            if (!cur.node_on[v]) continue;
            diff[v] = dR[v] - dB[v];
            if (diff[v] >= 0 && diff[v] < 6 * (int64_t)b) x[v][diff[v] / 2] = 1;
        }
        std::vector<i128> totals = count_oracle(cur, b, x, ctx);
        size_t best = 0;
        for (size_t k = 1; k < totals.size(); ++k)
            if (totals[k] < totals[best]) best = k; // ties keep the smallest j
        const int64_t jstar = 2 * (int64_t)best;
        LDD_ENSURE(totals[best] * 3 * b <= n, "phase deletion exceeds n/(3b)");

        int64_t deleted = 0;
        for (NodeId v = 0; v < G.n; ++v) {
            if (!cur.node_on[v]) continue;
            if (diff[v] == jstar || diff[v] == jstar + 1) {
                cur.node_on[v] = 0;
                inQ[v] = 0;
                ++deleted;
            } else if (inQ[v] && diff[v] >= 0 && diff[v] <= jstar + 1) {
                inQ[v] = 0; // center too close to the opposite color
            }
        }
        LDD_ENSURE(deleted == (int64_t)totals[best], "count oracle disagrees with deletion");
        out.phases.push_back({(int)jstar, deleted,
                              (int64_t)active_centers(cur, inQ).size()});
        audit_phase(G, cur, inQ, i + 1, b);
    }

    // Clusters are the surviving components; each has exactly one center.
    int32_t comp_count = 0;
    std::vector<int32_t> comp = components(cur, &comp_count);
    out.clusters.resize(comp_count);
    for (NodeId v = 0; v < G.n; ++v) {
        if (!cur.node_on[v]) {
            out.unclustered.push_back(v);
            continue;
        }
        StrongCluster& c = out.clusters[comp[v]];
        c.nodes.push_back(v);
        if (inQ[v]) {
            LDD_ENSURE(c.center == NO_NODE, "two centers in one cluster");
            c.center = v;
        }
    }
    std::vector<NodeId> centers;
    for (const StrongCluster& c : out.clusters) {
        LDD_ENSURE(c.center != NO_NODE, "cluster without a center");
        centers.push_back(c.center);
    }
    if (!centers.empty()) {
        const int64_t radius_cap = (int64_t)6 * b * b;
        DistResult d = dijkstra_multi(cur, centers, nullptr, (i128)radius_cap);
        for (NodeId v = 0; v < G.n; ++v) {
            if (!cur.node_on[v]) continue;
            LDD_ENSURE(d.reached(v), "cluster radius exceeds 6*b^2");
            StrongCluster& c = out.clusters[comp[v]];
            LDD_ENSURE(d.root[v] == c.center, "tree crosses cluster boundary");
            c.radius = std::max(c.radius, (int64_t)d.dist[v]);
            if (d.pred[v] != NO_NODE) c.tree_edges.push_back({d.pred[v], v});
        }
    }
    int64_t covered = 0;
    for (const StrongCluster& c : out.clusters) covered += (int64_t)c.nodes.size();
    LDD_ENSURE(3 * covered >= 2 * n, "coverage below ceil(2n/3)");
    return out;
}

StrongClustering strong_cluster_composed(const WeightedGraph& G, OracleCtx* ctx) {
    // Identity pre-clustering: one weak cluster spanning the whole graph,
    // then the phase algorithm on it. Coverage stays at the full 2n/3.
    return strong_cluster(G, ctx);
}

} // namespace lddkit
