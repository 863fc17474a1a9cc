#include "lddkit/clustering.hpp"

#include <algorithm>
#include <utility>

#include "lddkit/config.hpp"
#include "lddkit/dijkstra.hpp"
#include "lddkit/errors.hpp"

namespace lddkit {

namespace {

// sum of mu(v) * r(v) over the active nodes (optionally within a mask), exact.
Int radius_mass(const Subgraph& H, const std::vector<i128>& r, const std::vector<i128>& mu,
                const std::vector<char>* sel) {
    Int acc = 0;
    for (NodeId v = 0; v < H.g->n; ++v) {
        if (!H.has_node(v)) continue;
        if (sel && !(*sel)[v]) continue;
        acc += mpz_of_i128(mu[v]) * mpz_of_i128(r[v]);
    }
    return acc;
}

// Deterministic recursion depth: 1 + floor(log2 mass), 0 for zero mass.
int det_depth(const Int& mass) {
    if (mass == 0) return 0;
    return 1 + (int)(mpz_sizeinbase(mass.get_mpz_t(), 2) - 1);
}

RbSplitResult rb_split_impl(const Subgraph& H, const std::vector<i128>& r,
                            const std::vector<i128>& mu, const std::vector<char>& qr,
                            const std::vector<char>& qb, const std::vector<Rat>& del, const Rat& R,
                            const Rat& D, const Mode& mode, const Rat& eps,
                            const DistOptions& dist, int depth, OracleCtx* ctx) {
    const WeightedGraph& g = *H.g;
    const int32_t n = g.n;
    const EdgeId m = (EdgeId)g.edges.size();

    std::vector<NodeId> q_list;
    for (NodeId v = 0; v < n; ++v)
        if (qr[v] || qb[v]) q_list.push_back(v);
    LDD_REQUIRE(!q_list.empty(), "rb_split: empty terminal set");

    RootedForest F = dist_oracle(H, q_list, &del, R, eps, dist, ctx);
    for (NodeId v = 0; v < n; ++v)
        LDD_REQUIRE(!H.has_node(v) || F.in(v),
                    "rb_split: a node is farther than R from the terminals");

    // Domains: the nodes owned by each color's terminals.
    std::vector<char> ur(n, 0), ub(n, 0);
    for (NodeId v = 0; v < n; ++v) {
        if (!H.has_node(v)) continue;
        NodeId rt = F.root[v];
        LDD_ENSURE(rt != NO_NODE && (qr[rt] || qb[rt]), "rb_split: forest rooted outside Q");
        ur[v] = qr[rt];
        ub[v] = qb[rt];
    }

    RbSplitResult out;
    out.depth = depth;
    if (depth == 0) {
        // Base: drop every edge whose endpoints belong to different colors.
        out.h_prime = H;
        for (EdgeId e = 0; e < m; ++e) {
            if (!H.has_edge(e)) continue;
            NodeId a = g.edges[e].u, b2 = g.edges[e].v;
            if ((ur[a] && ub[b2]) || (ub[a] && ur[b2])) out.h_prime.edge_on[e] = 0;
        }
        out.qr_prime.assign(n, 0);
        out.qb_prime.assign(n, 0);
        out.v_good.assign(n, 0);
        out.v_bad.assign(n, 0);
        for (NodeId v = 0; v < n; ++v) {
            out.qr_prime[v] = qr[v] && ur[v];
            out.qb_prime[v] = qb[v] && ub[v];
            if (!H.has_node(v)) continue;
            out.v_bad[v] = r[v] > 0;
            out.v_good[v] = !out.v_bad[v];
        }
        return out;
    }

    // Pick the color to peel: a fair coin, or the heavier weighted radius
    // mass (ties to red) so the remaining mass at least halves.
    bool pick_red;
    if (mode.randomized) {
        pick_red = mode.coin();
    } else {
        pick_red = radius_mass(H, r, mu, &ur) >= radius_mass(H, r, mu, &ub);
    }
    const std::vector<char>& ua = pick_red ? ur : ub;
    const std::vector<char>& qa = pick_red ? qr : qb;

    // Blur the chosen domain at scale D; an empty domain blurs to nothing.
    std::vector<NodeId> ua_list;
    for (NodeId v = 0; v < n; ++v)
        if (ua[v]) ua_list.push_back(v);
    std::vector<char> w(n, 0), level_bad(n, 0);
    if (!ua_list.empty()) {
        BlurOptions bopt;
        bopt.eps = eps;
        bopt.dist = dist;
        BlurResult br = blur(H, ua_list, r, mu, D, mode, bopt, ctx);
        w = std::move(br.s_sup);
        level_bad = std::move(br.v_bad);
    }

    // Remove the blurred part and recurse on the rest. A node outside W whose
    // forest parent was cut away becomes a terminal of the peeled color; a
    // surviving root keeps the other color.
    Subgraph h_rec = H;
    int32_t rest = 0;
    for (NodeId v = 0; v < n; ++v) {
        if (w[v]) h_rec.node_on[v] = 0;
        rest += h_rec.has_node(v);
    }

    std::vector<char> qa_rec(n, 0), qabar_rec(n, 0);
    std::vector<Rat> del_rec(n, Rat(0));
    for (NodeId v = 0; v < n; ++v) {
        if (!h_rec.has_node(v)) continue;
        bool terminal = false;
        NodeId p = F.parent[v];
        if (p != NO_NODE && w[p]) {
            qa_rec[v] = 1;
            terminal = true;
        } else if (p == NO_NODE) {
            // A root that survived the cut cannot be of the peeled color:
            // peeled-color roots sit inside their own blurred domain.
            LDD_ENSURE(!ua[v], "rb_split: a peeled-color root survived the cut");
            qabar_rec[v] = 1;
            terminal = true;
        }
        if (terminal) del_rec[v] = (Rat(1) + eps) * (del[F.root[v]] + rat_of_i128(F.dF[v])) + 3 * D;
    }

    RbSplitResult rec;
    bool rec_ran = false;
    if (rest > 0) {
        int rec_depth;
        if (mode.randomized) {
            rec_depth = depth - 1;
        } else {
            rec_depth = det_depth(radius_mass(h_rec, r, mu, nullptr));
            LDD_ENSURE(rec_depth <= depth - 1, "rb_split: residual mass failed to halve");
        }
        Rat r_rec = (Rat(1) + eps) * (Rat(1) + eps) * R + 3 * D;
        rec = rb_split_impl(h_rec, r, mu, pick_red ? qa_rec : qabar_rec,
                            pick_red ? qabar_rec : qa_rec, del_rec, r_rec, D, mode, eps, dist,
                            rec_depth, ctx);
        rec_ran = true;
    }

    // Assemble: edges inside the peeled part, edges the recursion kept, and
    // one bridge from each surviving peeled-color terminal to its old parent.
    out.h_prime.g = H.g;
    out.h_prime.node_on = H.node_on;
    out.h_prime.edge_on.assign(m, 0);
    for (EdgeId e = 0; e < m; ++e) {
        if (!H.has_edge(e)) continue;
        NodeId a = g.edges[e].u, b2 = g.edges[e].v;
        if ((w[a] && w[b2]) || (rec_ran && rec.h_prime.has_edge(e))) out.h_prime.edge_on[e] = 1;
    }
    if (rec_ran) {
        const std::vector<char>& rec_qa_prime = pick_red ? rec.qr_prime : rec.qb_prime;
        for (NodeId v = 0; v < n; ++v) {
            if (!rec_qa_prime[v]) continue;
            LDD_ENSURE(qa_rec[v], "rb_split: recursion returned a foreign terminal");
            out.h_prime.edge_on[F.link_edge[v]] = 1;
        }
    }

    out.qr_prime.assign(n, 0);
    out.qb_prime.assign(n, 0);
    for (NodeId v = 0; v < n; ++v) {
        char own = qa[v] && ua[v];
        char other = rec_ran ? (pick_red ? rec.qb_prime[v] : rec.qr_prime[v]) : (char)0;
        out.qr_prime[v] = pick_red ? own : other;
        out.qb_prime[v] = pick_red ? other : own;
    }

    out.v_bad = std::move(level_bad);
    out.v_good.assign(n, 0);
    for (NodeId v = 0; v < n; ++v) {
        if (rec_ran && rec.v_bad[v]) out.v_bad[v] = 1;
        if (H.has_node(v)) out.v_good[v] = !out.v_bad[v];
    }
    return out;
}

}  // namespace

RbSplitResult rb_split(const Subgraph& H, const std::vector<i128>& r, const std::vector<i128>& mu,
                       const std::vector<char>& q_red, const std::vector<char>& q_blue,
                       const std::vector<Rat>& del, const Rat& R, const Rat& D, const Mode& mode,
                       const RbOptions& opt, OracleCtx* ctx) {
    LDD_REQUIRE(H.g != nullptr, "rb_split: null graph");
    const int32_t n = H.g->n;
    LDD_REQUIRE((int32_t)r.size() == n && (int32_t)mu.size() == n, "rb_split: attribute size mismatch");
    LDD_REQUIRE((int32_t)q_red.size() == n && (int32_t)q_blue.size() == n,
                "rb_split: terminal mask size mismatch");
    LDD_REQUIRE((int32_t)del.size() == n, "rb_split: delay size mismatch");
    LDD_REQUIRE(sgn(D) > 0, "rb_split: the cut scale D must be positive");
    LDD_REQUIRE(sgn(R) >= 0, "rb_split: negative ruling bound");
    i128 active = 0;
    for (NodeId v = 0; v < n; ++v) {
        if (H.has_node(v)) ++active;
        LDD_REQUIRE(r[v] >= 0 && mu[v] >= 0, "rb_split: negative radius or weight");
        LDD_REQUIRE(!(q_red[v] && q_blue[v]), "rb_split: a terminal with both colors");
        if (q_red[v] || q_blue[v]) {
            LDD_REQUIRE(H.has_node(v), "rb_split: inactive terminal");
            LDD_REQUIRE(sgn(del[v]) >= 0, "rb_split: negative delay");
        }
    }
    Rat eps = opt.eps;
    if (sgn(eps) < 0) eps = default_eps_log(active);
    LDD_REQUIRE(eps <= Rat(1, 2), "rb_split: precision above 1/2");

    int depth;
    if (mode.randomized) {
        LDD_REQUIRE(mode.coin != nullptr, "rb_split: randomized mode without a coin");
        depth = opt.depth >= 0 ? opt.depth : (int)std::max(0L, ceil_log2_rat(D));
    } else {
        depth = det_depth(radius_mass(H, r, mu, nullptr));
    }
    return rb_split_impl(H, r, mu, q_red, q_blue, del, R, D, mode, eps, opt.dist, depth, ctx);
}

SteroidsResult steroids(const Subgraph& H, const std::vector<i128>& r, const std::vector<i128>& mu,
                        const std::vector<NodeId>& q, const std::vector<Rat>& del, const Rat& R,
                        const Rat& D, const Mode& mode, const SteroidsOptions& opt,
                        OracleCtx* ctx) {
    LDD_REQUIRE(H.g != nullptr, "steroids: null graph");
    const WeightedGraph& g = *H.g;
    const int32_t n = g.n;
    LDD_REQUIRE((int32_t)r.size() == n && (int32_t)mu.size() == n,
                "steroids: attribute size mismatch");
    LDD_REQUIRE((int32_t)del.size() == n, "steroids: delay size mismatch");
    LDD_REQUIRE(sgn(D) > 0, "steroids: the cut scale D must be positive");
    LDD_REQUIRE(sgn(R) >= 0, "steroids: negative ruling bound");
    LDD_REQUIRE(!q.empty(), "steroids: empty terminal set");
    i128 active = H.count_nodes();
    LDD_REQUIRE(active > 0, "steroids: empty graph");

    Rat eps = opt.eps;
    if (sgn(eps) < 0) eps = default_eps_log2(active);
    LDD_REQUIRE(sgn(eps) >= 0 && eps <= Rat(1, 2), "steroids: precision out of range");

    std::vector<char> cur_q(n, 0);
    for (NodeId v : q) {
        LDD_REQUIRE(v >= 0 && v < n && H.has_node(v), "steroids: invalid terminal");
        LDD_REQUIRE(sgn(del[v]) >= 0, "steroids: negative delay");
        cur_q[v] = 1;
    }

    const int b = g.bits;
    const int rand_depth = opt.depth >= 0 ? opt.depth : (int)std::max(0L, ceil_log2_rat(D));
    const Int total_mass = radius_mass(H, r, mu, nullptr);
    const Rat shrink = rat_pow(Rat(1) - eps, blur_exponent(D));

    SteroidsResult out;
    out.v_bad.assign(n, 0);
    Subgraph h_cur = H;
    Rat r_cur = R;

    for (int i = 0; i < b; ++i) {
        const int bit = b - 1 - i;
        std::vector<char> qr(n, 0), qb(n, 0);
        int32_t reds = 0, blues = 0;
        for (NodeId v = 0; v < n; ++v) {
            if (!cur_q[v]) continue;
            if ((g.ids[v] >> bit) & 1) {
                qr[v] = 1;
                ++reds;
            } else {
                qb[v] = 1;
                ++blues;
            }
        }
        // A one-sided phase is an identity: every terminal agrees on this
        // bit, so the separation invariant already holds and running the
        // split would only cut and blur for nothing. Any two terminals that
        // share a component still get split at the first bit they differ in.
        if (reds == 0 || blues == 0) continue;
        RbOptions ro;
        ro.eps = eps;
        ro.dist = opt.dist;
        ro.depth = rand_depth;
        RbSplitResult rs = rb_split(h_cur, r, mu, qr, qb, del, r_cur, D, mode, ro, ctx);

        // Compose the ruling bound for the next phase.
        Rat add(0);
        for (int j = 1; j <= rs.depth; ++j) add += rat_pow(Rat(1) + eps, 2 * (unsigned)j);
        r_cur = rat_pow(Rat(1) + eps, 2 * (unsigned)(rs.depth + 1)) * r_cur + add * 3 * D;

        h_cur = std::move(rs.h_prime);
        for (NodeId v = 0; v < n; ++v) {
            cur_q[v] = rs.qr_prime[v] || rs.qb_prime[v];
            if (rs.v_bad[v]) out.v_bad[v] = 1;
        }

        // Invariant: no component of the current graph holds terminals whose
        // ids differ in any bit split so far.
        {
            std::vector<int32_t> comp = components(h_cur);
            std::vector<uint64_t> sig(n, UINT64_MAX);
            for (NodeId v = 0; v < n; ++v) {
                if (!cur_q[v]) continue;
                uint64_t prefix = g.ids[v] >> bit;
                uint64_t& s = sig[comp[v]];
                LDD_ENSURE(s == UINT64_MAX || s == prefix, "steroids: components not separated");
                s = prefix;
            }
        }
        // Invariant (deterministic): accumulated bad mass stays within the
        // per-phase budget 20 * sum(mu r) / (D * (1-eps)^E).
        if (!mode.randomized) {
            Int bad_mu = 0;
            for (NodeId v = 0; v < n; ++v)
                if (out.v_bad[v]) bad_mu += mpz_of_i128(mu[v]);
            LDD_ENSURE(Rat(bad_mu) * D * shrink <= Rat(20 * (i + 1)) * Rat(total_mass),
                       "steroids: bad mass above the deterministic budget");
        }

        SteroidsPhase ph;
        ph.bit = bit;
        ph.depth = rs.depth;
        ph.r_bound = r_cur;
        ph.edge_on = h_cur.edge_on;
        out.phases.push_back(std::move(ph));
    }

    // Final certificate: every active node within r_cur of the surviving
    // terminals, and exactly one terminal per component.
    std::vector<NodeId> q_list;
    for (NodeId v = 0; v < n; ++v)
        if (cur_q[v]) q_list.push_back(v);
    LDD_ENSURE(!q_list.empty(), "steroids: no terminal survived");
    RatDistResult fin = delayed_dist(h_cur, q_list, &del, &r_cur);

    int32_t ncomp = 0;
    std::vector<int32_t> comp = components(h_cur, &ncomp);
    out.clusters.assign(ncomp, {});
    out.center.assign(ncomp, NO_NODE);
    out.dist_cert.assign(n, Rat(0));
    out.v_good.assign(n, 0);
    for (NodeId v = 0; v < n; ++v) {
        if (!h_cur.has_node(v)) continue;
        out.clusters[comp[v]].push_back(v);
        if (cur_q[v]) {
            LDD_ENSURE(out.center[comp[v]] == NO_NODE, "steroids: two terminals in one cluster");
            out.center[comp[v]] = v;
        }
        LDD_ENSURE(fin.reached[v], "steroids: final ruling bound violated");
        out.dist_cert[v] = fin.dist[v];
        out.v_good[v] = !out.v_bad[v];
    }
    for (int32_t c = 0; c < ncomp; ++c)
        LDD_ENSURE(out.center[c] != NO_NODE, "steroids: a cluster without a terminal");
    out.cluster_of = std::move(comp);
    out.q_prime = std::move(cur_q);
    out.h_final = std::move(h_cur);
    out.r_bound = r_cur;
    return out;
}

PaddedPartition padded_partition(const Subgraph& G, i128 D, const std::vector<i128>& mu,
                                 const Mode& mode, const PaddedOptions& opt, OracleCtx* ctx) {
    LDD_REQUIRE(G.g != nullptr, "padded_partition: null graph");
    LDD_REQUIRE(D >= 1, "padded_partition: D must be at least 1");
    const int32_t n = G.g->n;
    LDD_REQUIRE((int32_t)mu.size() == n, "padded_partition: weight size mismatch");
    i128 active = G.count_nodes();
    LDD_REQUIRE(active > 0, "padded_partition: empty graph");

    const long scale = opt.scale > 0 ? opt.scale : kPaddedPartitionScale;
    const long lg = (long)ceil_log2_at_least4(active);
    Rat d_st = rat_of_i128(D) * Rat(scale * lg);

    std::vector<i128> rvec(n, 0);
    std::vector<Rat> del0(n, Rat(0));
    std::vector<NodeId> q_all;
    for (NodeId v = 0; v < n; ++v) {
        if (!G.has_node(v)) continue;
        rvec[v] = D;
        q_all.push_back(v);
    }

    SteroidsOptions so;
    so.eps = sgn(opt.eps) < 0 ? default_eps_log2(active) : opt.eps;
    so.dist = opt.dist;
    SteroidsResult st = steroids(G, rvec, mu, q_all, del0, Rat(0), d_st, mode, so, ctx);

    PaddedPartition out;
    out.clusters = std::move(st.clusters);
    out.center = std::move(st.center);
    out.cluster_of = std::move(st.cluster_of);
    out.v_good = std::move(st.v_good);
    out.v_bad = std::move(st.v_bad);
    out.diameter_bound = 2 * st.r_bound;
    for (const SteroidsPhase& ph : st.phases) out.depth = std::max(out.depth, ph.depth);
    return out;
}

SparseCover sparse_cover(const Subgraph& G, i128 D, const Mode& mode, const CoverOptions& opt,
                         OracleCtx* ctx) {
    LDD_REQUIRE(G.g != nullptr, "sparse_cover: null graph");
    const int32_t n = G.g->n;
    i128 active = G.count_nodes();
    LDD_REQUIRE(active > 0, "sparse_cover: empty graph");
    const int t = opt.rounds > 0 ? opt.rounds
                                 : (int)(kCoverRoundFactor * (long)ceil_log2_at_least4(active));

    SparseCover out;
    out.t = t;
    out.padded_count.assign(n, 0);
    std::vector<i128> w(n, 0);
    for (NodeId v = 0; v < n; ++v)
        if (G.has_node(v)) w[v] = 1;

    // D-balls, computed once: padding is a property of the fixed graph.
    std::vector<std::vector<NodeId>> ball(n);
    for (NodeId v = 0; v < n; ++v) {
        if (!G.has_node(v)) continue;
        DistResult dr = dijkstra_multi(G, {v}, nullptr, D);
        for (NodeId u = 0; u < n; ++u)
            if (dr.reached(u)) ball[v].push_back(u);
    }

    PaddedOptions po;
    po.eps = opt.eps;
    po.dist = opt.dist;
    po.scale = opt.scale;
    for (int round = 0; round < t; ++round) {
        PaddedPartition p = padded_partition(G, D, w, mode, po, ctx);
        std::vector<char> pad(n, 0);
        for (NodeId v = 0; v < n; ++v) {
            if (!G.has_node(v)) continue;
            pad[v] = 1;
            for (NodeId u : ball[v])
                if (p.cluster_of[u] != p.cluster_of[v]) {
                    pad[v] = 0;
                    break;
                }
            LDD_ENSURE(!p.v_good[v] || pad[v], "sparse_cover: a certified node is not padded");
            if (pad[v])
                ++out.padded_count[v];
            if (!p.v_good[v])
                w[v] = checked_add(w[v], w[v]);
        }
        out.rounds.push_back(std::move(p));
        out.padded.push_back(std::move(pad));
    }
    const int need = (2 * t + 2) / 3;
    for (NodeId v = 0; v < n; ++v)
        LDD_ENSURE(!G.has_node(v) || out.padded_count[v] >= need,
                   "sparse_cover: a node is padded in too few rounds");
    return out;
}

EdgeCutResult edge_cutting(const Subgraph& H, const std::vector<i128>& mu_e,
                           const std::vector<NodeId>& q, const std::vector<Rat>& del, const Rat& R,
                           const Rat& eps, const Mode& mode, const EdgeCutOptions& opt,
                           OracleCtx* ctx) {
    LDD_REQUIRE(H.g != nullptr, "edge_cutting: null graph");
    const WeightedGraph& g = *H.g;
    const int32_t n = g.n;
    const EdgeId m = (EdgeId)g.edges.size();
    LDD_REQUIRE((EdgeId)mu_e.size() == m, "edge_cutting: edge weight size mismatch");
    LDD_REQUIRE((int32_t)del.size() == n, "edge_cutting: delay size mismatch");
    LDD_REQUIRE(sgn(eps) > 0 && eps <= 1, "edge_cutting: eps must be in (0, 1]");
    LDD_REQUIRE(sgn(R) > 0, "edge_cutting: R must be positive");
    LDD_REQUIRE(!q.empty(), "edge_cutting: empty terminal set");

    // Work on the subdivision: midpoints inherit their edge's length as the
    // radius and its weight, so a cut edge always shows up as a bad midpoint.
    Subdivision sd = subdivide(g);
    Subgraph hs(sd.graph);
    hs.node_on.assign(sd.graph.n, 0);
    hs.edge_on.assign(sd.graph.edges.size(), 0);
    std::vector<i128> rs(sd.graph.n, 0), ms(sd.graph.n, 0);
    std::vector<Rat> dels(sd.graph.n, Rat(0));
    i128 active = 0;
    for (NodeId v = 0; v < n; ++v) {
        if (!H.has_node(v)) continue;
        hs.node_on[v] = 1;
        dels[v] = del[v];
        ++active;
    }
    for (EdgeId e = 0; e < m; ++e) {
        if (!H.has_edge(e)) continue;
        LDD_REQUIRE(mu_e[e] >= 0, "edge_cutting: negative edge weight");
        NodeId mid = sd.edge_node[e];
        hs.node_on[mid] = 1;
        rs[mid] = g.edges[e].len;
        ms[mid] = mu_e[e];
        for (int32_t k = sd.graph.adj_off[mid]; k < sd.graph.adj_off[mid + 1]; ++k)
            hs.edge_on[sd.graph.adj_edge[k]] = 1;
        ++active;
    }

    const long lg = (long)ceil_log2_at_least4(active);
    Rat d_cut = eps * R / Rat(kEdgeCutC1Den * lg * lg);
    Rat eps_st = eps / Rat(kEdgeCutC2Den * lg * lg);

    SteroidsOptions so;
    so.eps = eps_st;
    so.dist = opt.dist;
    so.depth = opt.depth;
    SteroidsResult st = steroids(hs, rs, ms, q, dels, R, d_cut, mode, so, ctx);

    EdgeCutResult out;
    out.cluster_of.assign(n, -1);
    out.q_prime.assign(n, 0);
    out.dist_cert.assign(n, Rat(0));
    out.clusters.assign(st.clusters.size(), {});
    out.center.assign(st.clusters.size(), NO_NODE);
    for (size_t c = 0; c < st.clusters.size(); ++c) {
        for (NodeId v : st.clusters[c])
            if (v < n) out.clusters[c].push_back(v);
        LDD_ENSURE(!out.clusters[c].empty(), "edge_cutting: a cluster without original nodes");
        out.center[c] = st.center[c];
        LDD_ENSURE(st.center[c] < n, "edge_cutting: a terminal off the original graph");
    }
    for (NodeId v = 0; v < n; ++v) {
        if (!H.has_node(v)) continue;
        out.cluster_of[v] = st.cluster_of[v];
        out.q_prime[v] = st.q_prime[v];
        out.dist_cert[v] = st.dist_cert[v];
    }

    for (EdgeId e = 0; e < m; ++e) {
        if (!H.has_edge(e)) continue;
        if (out.cluster_of[g.edges[e].u] != out.cluster_of[g.edges[e].v]) {
            // A zero-length edge can be severed without its midpoint going
            // bad: separating two terminals at mutual distance zero forces
            // the cut, and the edge contributes nothing to the length-scaled
            // budget. Positive lengths always carry a bad midpoint.
            LDD_ENSURE(st.v_bad[sd.edge_node[e]] || g.edges[e].len == 0,
                       "edge_cutting: a cut edge with a good midpoint");
            out.e_bad.push_back(e);
        }
    }

    // Exact slack: the in-cluster delayed distance exceeds the original one
    // by at most eps * R.
    RatDistResult base = delayed_dist(H, q, &del, nullptr);
    Rat slack = eps * R;
    for (NodeId v = 0; v < n; ++v) {
        if (!H.has_node(v)) continue;
        LDD_REQUIRE(base.reached[v], "edge_cutting: a node unreachable from the terminals");
        LDD_ENSURE(out.dist_cert[v] <= base.dist[v] + slack,
                   "edge_cutting: ruling slack above eps * R");
    }
    return out;
}

}  // namespace lddkit
