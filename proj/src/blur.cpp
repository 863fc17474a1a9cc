#include "lddkit/blur.hpp"

#include <algorithm>

#include "lddkit/dijkstra.hpp"
#include "lddkit/errors.hpp"

namespace lddkit {

namespace {

std::vector<NodeId> mask_to_list(const Subgraph& G, const std::vector<char>& mask) {
    std::vector<NodeId> out;
    for (NodeId v = 0; v < G.g->n; ++v)
        if (G.has_node(v) && mask[v]) out.push_back(v);
    return out;
}

// Exact re-check of the handoff invariant: every active node outside the
// middle set is either already (1+eps)-close to the sources or its
// (1+eps)r(v) ball lies entirely at distance >= D from them.
void audit_handoff(const Subgraph& G, const std::vector<char>& inS, const std::vector<i128>& r,
                   const Rat& eps, const Rat& D, const std::vector<char>& middle) {
    std::vector<NodeId> S = mask_to_list(G, inS);
    DistResult ds = dijkstra_multi(G, S, nullptr, INF128);
    for (NodeId v = 0; v < G.g->n; ++v) {
        if (!G.has_node(v) || middle[v]) continue;
        Rat rad = (Rat(1) + eps) * rat_of_i128(r[v]);
        if (ds.reached(v) && rat_of_i128(ds.dist[v]) <= rad) continue; // very close
        RatDistResult ball = delayed_dist(G, {v}, nullptr, &rad);
        bool far = true;
        for (NodeId u = 0; u < G.g->n && far; ++u) {
            if (!G.has_node(u) || !ball.reached[u]) continue;
            if (ds.reached(u) && rat_of_i128(ds.dist[u]) < D) far = false;
        }
        LDD_ENSURE(far, "blur: node left the middle set while neither close nor far");
    }
}

} // namespace

BlurResult blur(const Subgraph& G, const std::vector<NodeId>& S, const std::vector<i128>& r,
                const std::vector<i128>& mu, const Rat& D, const Mode& mode,
                const BlurOptions& opt, OracleCtx* ctx) {
    const WeightedGraph& g = *G.g;
    LDD_REQUIRE(!S.empty(), "blur: source set must be nonempty");
    LDD_REQUIRE(r.size() == (size_t)g.n && mu.size() == (size_t)g.n,
                "blur: r and mu must have one entry per node");
    LDD_REQUIRE(sgn(D) > 0, "blur: D must be positive");
    for (NodeId s : S) LDD_REQUIRE(G.has_node(s), "blur: source outside the subgraph");
    for (NodeId v = 0; v < g.n; ++v)
        if (G.has_node(v)) LDD_REQUIRE(r[v] >= 0 && mu[v] >= 0, "blur: negative radius or weight");
    LDD_REQUIRE(!mode.randomized || mode.coin, "blur: randomized mode needs a coin");
    Rat eps = opt.eps;
    if (sgn(eps) < 0) eps = default_eps_log(G.count_nodes());
    LDD_REQUIRE(eps <= Rat(1, 2), "blur: precision above 1/2");

    const Rat one_plus = Rat(1) + eps;
    std::vector<char> inS(g.n, 0);
    for (NodeId s : S) inS[s] = 1;
    std::vector<char> unsafe(g.n, 0), middle(g.n, 0);
    for (NodeId v = 0; v < g.n; ++v) {
        if (!G.has_node(v)) continue;
        unsafe[v] = r[v] > 0;
        middle[v] = 1;
    }

    BlurResult out;
    Rat Dk = D;
    while (Dk > 1) {
        const Rat half = Dk / 2, tenth = Dk / 10;
        RootedForest TS = dist_oracle(G, mask_to_list(G, inS), nullptr, half, eps, opt.dist, ctx);
        std::vector<char> sbig(g.n, 0);
        std::vector<NodeId> sbig_list, comp_list;
        for (NodeId v = 0; v < g.n; ++v) {
            if (!G.has_node(v)) continue;
            if (TS.in(v)) {
                sbig[v] = 1;
                sbig_list.push_back(v);
            } else {
                comp_list.push_back(v);
            }
        }
        RootedForest T1 = dist_oracle(G, sbig_list, nullptr, Dk, eps, opt.dist, ctx);
        // An empty complement means nothing can be close to it, so the second
        // branch keeps only the escapers and its potential is zero.
        const bool have2 = !comp_list.empty();
        RootedForest T2;
        if (have2) T2 = dist_oracle(G, comp_list, nullptr, Dk, eps, opt.dist, ctx);

        auto close_in = [&](const RootedForest& T, NodeId v) {
            return T.in(v) && rat_of_i128(T.dF[v]) <= one_plus * rat_of_i128(r[v]);
        };
        std::vector<char> u1(g.n, 0), u2(g.n, 0), mid2 = middle;
        for (NodeId v = 0; v < g.n; ++v) {
            if (!G.has_node(v) || !unsafe[v]) continue;
            const bool escapes = rat_of_i128(r[v]) > tenth;
            u1[v] = escapes || close_in(T1, v);
            u2[v] = escapes || (have2 && close_in(T2, v));
            if (!escapes && u1[v] && u2[v]) mid2[v] = 0;
        }
        i128 phi1 = 0, phi2 = 0;
        for (NodeId v = 0; v < g.n; ++v) {
            if (!G.has_node(v) || (!u1[v] && !u2[v])) continue;
            if (rat_of_i128(r[v]) > tenth) continue;
            i128 term = checked_mul(mu[v], r[v]);
            if (mid2[v]) term = checked_add(term, term);
            if (u1[v]) phi1 = checked_add(phi1, term);
            if (u2[v]) phi2 = checked_add(phi2, term);
        }

        const bool keep = mode.randomized ? mode.coin() : phi1 <= phi2;
        if (!keep) inS = sbig;
        unsafe = keep ? u1 : u2;
        middle = mid2;
        out.trace.push_back(BlurLevel{Dk, keep ? 1 : 2, phi1, phi2});
        Dk = (Rat(1) - eps) * Dk / 2;
        Dk.canonicalize();
        if (opt.audit) audit_handoff(G, inS, r, eps, Dk, middle);
    }
    out.s_sup = std::move(inS);
    out.v_bad = std::move(unsafe);
    return out;
}

std::vector<NodeId> exact_blur_coins(const Subgraph& G, const std::vector<NodeId>& S,
                                     const Rat& D, const CoinFn& coin) {
    LDD_REQUIRE(!S.empty(), "exact_blur: source set must be nonempty");
    LDD_REQUIRE(sgn(D) > 0, "exact_blur: D must be positive");
    LDD_REQUIRE(static_cast<bool>(coin), "exact_blur: needs a coin");
    for (NodeId s : S) LDD_REQUIRE(G.has_node(s), "exact_blur: source outside the subgraph");
    std::vector<NodeId> cur = S;
    std::sort(cur.begin(), cur.end());
    cur.erase(std::unique(cur.begin(), cur.end()), cur.end());
    Rat Dk = D;
    while (Dk > 1) {
        const Rat half = Dk / 2;
        if (!coin()) {
            RatDistResult rd = delayed_dist(G, cur, nullptr, &half);
            cur.clear();
            for (NodeId v = 0; v < G.g->n; ++v)
                if (G.has_node(v) && rd.reached[v]) cur.push_back(v);
        }
        Dk = half;
    }
    return cur;
}

std::vector<NodeId> exact_blur(const Subgraph& G, const std::vector<NodeId>& S, const Rat& D,
                               uint64_t seed) {
    SplitRng rng(seed);
    return exact_blur_coins(G, S, D, [&rng]() { return rng.coin(); });
}

BlurEdgeResult blurry_edge(const WeightedGraph& G, const std::vector<NodeId>& S,
                           const std::vector<i128>& mu_e, const Rat& D, const Mode& mode,
                           const BlurOptions& opt, OracleCtx* ctx) {
    LDD_REQUIRE(mu_e.size() == G.edges.size(), "blurry_edge: mu_e must have one entry per edge");
    for (const i128& m : mu_e) LDD_REQUIRE(m >= 0, "blurry_edge: negative edge weight");
    Subdivision sd = subdivide(G);
    Subgraph sg(sd.graph);
    std::vector<i128> r(sd.graph.n, 0), mu(sd.graph.n, 0);
    for (size_t e = 0; e < G.edges.size(); ++e) {
        r[sd.edge_node[e]] = G.edges[e].len;
        mu[sd.edge_node[e]] = mu_e[e];
    }
    BlurResult br = blur(sg, S, r, mu, D, mode, opt, ctx);
    BlurEdgeResult out;
    out.s_sup.assign(br.s_sup.begin(), br.s_sup.begin() + G.n);
    for (EdgeId e = 0; e < (EdgeId)G.edges.size(); ++e)
        if (br.v_bad[sd.edge_node[e]]) out.e_bad.push_back(e);
    return out;
}

} // namespace lddkit
