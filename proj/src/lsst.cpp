#include "lddkit/lsst.hpp"

#include <algorithm>
#include <utility>

#include "lddkit/blur.hpp"
#include "lddkit/clustering.hpp"
#include "lddkit/config.hpp"
#include "lddkit/dijkstra.hpp"
#include "lddkit/errors.hpp"
#include "lddkit/forest.hpp"

namespace lddkit {

namespace {

// Validates that the parts exactly cover the active nodes, pairwise
// disjoint, with each root inside its own part. Returns part_of.
std::vector<int32_t> index_parts(const Subgraph& G, const std::vector<std::vector<NodeId>>& parts,
                                 const std::vector<NodeId>& roots) {
    const int32_t n = G.g->n;
    LDD_REQUIRE(!parts.empty() && parts.size() == roots.size(),
                "star parts: parts and roots must align and be nonempty");
    std::vector<int32_t> part_of(n, -1);
    for (size_t i = 0; i < parts.size(); ++i) {
        LDD_REQUIRE(!parts[i].empty(), "star parts: empty part");
        for (NodeId v : parts[i]) {
            LDD_REQUIRE(v >= 0 && v < n && G.has_node(v), "star parts: invalid part node");
            LDD_REQUIRE(part_of[v] == -1, "star parts: parts overlap");
            part_of[v] = (int32_t)i;
        }
        NodeId r = roots[i];
        LDD_REQUIRE(r >= 0 && r < n && part_of[r] == (int32_t)i,
                    "star parts: a root lies outside its part");
    }
    for (NodeId v = 0; v < n; ++v)
        LDD_REQUIRE((part_of[v] != -1) == G.has_node(v),
                    "star parts: parts must cover the active nodes exactly");
    return part_of;
}

// The subgraph keeping only edges with both endpoints in the same part.
Subgraph in_part_subgraph(const Subgraph& G, const std::vector<int32_t>& part_of) {
    Subgraph H = G;
    const WeightedGraph& g = *G.g;
    for (EdgeId e = 0; e < (EdgeId)g.edges.size(); ++e)
        if (H.edge_on[e] && (!G.has_edge(e) || part_of[g.edges[e].u] != part_of[g.edges[e].v]))
            H.edge_on[e] = 0;
    return H;
}

// Orient the forest away from the roots and measure tree distances. Each
// tree must span exactly its own part.
void finalize_forest(const Subgraph& G, const std::vector<std::vector<NodeId>>& parts,
                     const std::vector<int32_t>& part_of, LsstForest* out) {
    const WeightedGraph& g = *G.g;
    const int32_t n = g.n;
    out->parent.assign(n, NO_NODE);
    out->link.assign(n, -1);
    out->root_of.assign(n, NO_NODE);
    out->depth_len.assign(n, 0);
    std::vector<char> seen(n, 0);
    std::vector<NodeId> queue;
    for (NodeId r : out->roots) {
        LDD_ENSURE(!seen[r], "lsst forest: a node is claimed by two trees");
        seen[r] = 1;
        out->root_of[r] = r;
        queue.push_back(r);
        for (size_t head = queue.size() - 1; head < queue.size(); ++head) {
            NodeId v = queue[head];
            for (int32_t a = g.adj_off[v]; a < g.adj_off[v + 1]; ++a) {
                EdgeId e = g.adj_edge[a];
                if (!out->in_forest[e]) continue;
                NodeId w = g.other(e, v);
                if (seen[w]) continue;
                LDD_ENSURE(part_of[w] == part_of[v], "lsst forest: a tree strayed across parts");
                seen[w] = 1;
                out->parent[w] = v;
                out->link[w] = e;
                out->root_of[w] = r;
                out->depth_len[w] = checked_add(out->depth_len[v], g.edges[e].len);
                queue.push_back(w);
            }
        }
    }
    out->edges.clear();
    i128 active = 0;
    for (NodeId v = 0; v < n; ++v) {
        if (!G.has_node(v)) continue;
        ++active;
        LDD_ENSURE(seen[v], "lsst forest: a tree failed to span its part");
    }
    for (EdgeId e = 0; e < (EdgeId)g.edges.size(); ++e)
        if (out->in_forest[e]) out->edges.push_back(e);
    LDD_ENSURE((i128)out->edges.size() == active - (i128)parts.size(),
               "lsst forest: edge count does not match a spanning forest");
}

}  // namespace

StarResult star_decompose(const Subgraph& G, const std::vector<std::vector<NodeId>>& parts,
                          const std::vector<NodeId>& roots, const Rat& R,
                          const std::vector<i128>& mu_e, const Rat& eps, const Mode& mode,
                          const StarOptions& opt, OracleCtx* ctx) {
    LDD_REQUIRE(G.g != nullptr, "star_decompose: null graph");
    const WeightedGraph& g = *G.g;
    const int32_t n = g.n;
    const EdgeId m = (EdgeId)g.edges.size();
    LDD_REQUIRE((EdgeId)mu_e.size() == m, "star_decompose: importance size mismatch");
    for (const i128& w : mu_e) LDD_REQUIRE(w >= 0, "star_decompose: negative importance");
    LDD_REQUIRE(sgn(eps) > 0 && eps <= Rat(1, 10),
                "star_decompose: the precision must lie in (0, 1/10]");
    LDD_REQUIRE(sgn(R) >= 0, "star_decompose: negative radius bound");

    const std::vector<int32_t> part_of = index_parts(G, parts, roots);
    const int32_t k = (int32_t)parts.size();
    Subgraph H = in_part_subgraph(G, part_of);

    // Exact per-part distances from the roots; parts share no edges in H, so
    // one multi-source run resolves every part independently. This also
    // enforces the radius precondition.
    DistResult din = dijkstra_multi(H, roots, nullptr, INF128);
    for (NodeId v = 0; v < n; ++v) {
        if (!G.has_node(v)) continue;
        LDD_REQUIRE(din.reached(v), "star_decompose: a part is disconnected from its root");
        LDD_REQUIRE(rat_of_i128(din.dist[v]) <= R, "star_decompose: part radius above the bound");
    }

    // The guiding forest and the core threshold at two thirds of the radius.
    RootedForest F = dist_oracle(H, roots, nullptr, R, eps / 100, opt.dist, ctx);
    const Rat thresh = Rat(2, 3) * R;
    std::vector<char> in_s(n, 0);
    std::vector<NodeId> s_list;
    for (NodeId v = 0; v < n; ++v) {
        if (!G.has_node(v)) continue;
        LDD_ENSURE(F.in(v), "star_decompose: the distance forest missed a node");
        if (rat_of_i128(F.dF[v]) <= thresh) {
            in_s[v] = 1;
            s_list.push_back(v);
        }
    }
    LDD_ENSURE(!s_list.empty(), "star_decompose: empty core seed");

    // Blur the core boundary over the subdivided graph: midpoints carry the
    // edge length as radius and the edge importance as weight.
    StarResult out;
    out.core.assign(n, 0);
    out.cut_weight = 0;
    Rat d_blur = eps * R / 100;
    if (sgn(d_blur) > 0) {
        Subdivision sd = subdivide(g);
        Subgraph hs(sd.graph);
        hs.node_on.assign(sd.graph.n, 0);
        hs.edge_on.assign(sd.graph.edges.size(), 0);
        std::vector<i128> rs(sd.graph.n, 0), ms(sd.graph.n, 0);
        for (NodeId v = 0; v < n; ++v) hs.node_on[v] = H.node_on[v];
        for (EdgeId e = 0; e < m; ++e) {
            if (!H.has_edge(e)) continue;
            NodeId mid = sd.edge_node[e];
            hs.node_on[mid] = 1;
            rs[mid] = g.edges[e].len;
            ms[mid] = mu_e[e];
            for (int32_t a = sd.graph.adj_off[mid]; a < sd.graph.adj_off[mid + 1]; ++a)
                hs.edge_on[sd.graph.adj_edge[a]] = 1;
        }
        BlurOptions bopt;
        bopt.dist = opt.dist;
        BlurResult br = blur(hs, s_list, rs, ms, d_blur, mode, bopt, ctx);
        for (NodeId v = 0; v < n; ++v) out.core[v] = br.s_sup[v];
    } else {
        out.core = in_s;
    }

    // Satellites: cut the region outside the core around the nodes whose
    // forest parent was absorbed, with their residual forest distance as the
    // delay.
    Subgraph hrest = H;
    i128 rest = 0;
    for (NodeId v = 0; v < n; ++v) {
        if (out.core[v]) hrest.node_on[v] = 0;
        rest += hrest.has_node(v);
    }
    EdgeCutResult cut;
    bool have_cut = rest > 0;
    if (have_cut) {
        std::vector<NodeId> qcut;
        std::vector<Rat> del_cut(n, Rat(0));
        for (NodeId v = 0; v < n; ++v) {
            if (!hrest.has_node(v)) continue;
            NodeId p = F.parent[v];
            if (p == NO_NODE || !out.core[p]) continue;
            del_cut[v] = rat_of_i128(F.dF[v]) - thresh;
            LDD_ENSURE(sgn(del_cut[v]) >= 0, "star_decompose: a boundary node under the threshold");
            qcut.push_back(v);
        }
        LDD_ENSURE(!qcut.empty(), "star_decompose: satellites without boundary terminals");
        EdgeCutOptions copt;
        copt.dist = opt.dist;
        cut = edge_cutting(hrest, mu_e, qcut, del_cut, R / 2, eps / 10, mode, copt, ctx);
    }

    // Assemble the per-part stars: the core piece first, then the cut
    // clusters, each tied to the core through its root's forest parent.
    out.stars.assign(k, {});
    for (int32_t i = 0; i < k; ++i) {
        LDD_ENSURE(out.core[roots[i]], "star_decompose: a root fell out of its core");
        out.stars[i].parts.emplace_back();
        out.stars[i].roots.push_back(roots[i]);
    }
    for (NodeId v = 0; v < n; ++v)
        if (out.core[v]) out.stars[part_of[v]].parts[0].push_back(v);
    if (have_cut) {
        for (size_t c = 0; c < cut.clusters.size(); ++c) {
            NodeId q = cut.center[c];
            int32_t i = part_of[q];
            for (NodeId v : cut.clusters[c])
                LDD_ENSURE(part_of[v] == i, "star_decompose: a satellite spans two parts");
            NodeId y = F.parent[q];
            LDD_ENSURE(y != NO_NODE && out.core[y] && part_of[y] == i,
                       "star_decompose: a satellite root lost its bridge");
            EdgeId link = F.link_edge[q];
            LDD_ENSURE(link >= 0, "star_decompose: a bridge without its edge");
            out.stars[i].parts.push_back(cut.clusters[c]);
            out.stars[i].roots.push_back(q);
            out.stars[i].bridges.push_back(link);
            out.stars[i].bridge_y.push_back(y);
        }
    }

    // Severed in-part edges and their total importance.
    for (EdgeId e = 0; e < m; ++e) {
        if (!H.has_edge(e)) continue;
        NodeId u = g.edges[e].u, v = g.edges[e].v;
        bool cut_edge = out.core[u] != out.core[v];
        if (!cut_edge && !out.core[u]) cut_edge = cut.cluster_of[u] != cut.cluster_of[v];
        if (cut_edge) {
            out.e_cut.push_back(e);
            out.cut_weight += mpz_of_i128(mu_e[e]);
        }
    }

    // The three star conditions, verified exactly piece by piece.
    const Rat radius_cap = Rat(3, 4) * R;
    for (int32_t i = 0; i < k; ++i) {
        const StarPart& st = out.stars[i];
        DistResult d0;
        for (size_t j = 0; j < st.parts.size(); ++j) {
            std::vector<char> keep(n, 0);
            for (NodeId v : st.parts[j]) keep[v] = 1;
            Subgraph piece = H.restrict_nodes(keep);
            DistResult dd = dijkstra_multi(piece, {st.roots[j]}, nullptr, INF128);
            for (NodeId v : st.parts[j]) {
                LDD_ENSURE(dd.reached(v), "star_decompose: a piece is disconnected from its root");
                LDD_ENSURE(rat_of_i128(dd.dist[v]) <= radius_cap,
                           "star_decompose: piece radius above three quarters of the bound");
                if (j == 0) {
                    LDD_ENSURE(rat_of_i128(dd.dist[v]) <=
                                   (Rat(1) + eps) * rat_of_i128(din.dist[v]),
                               "star_decompose: core distance above the tolerance");
                } else {
                    i128 detour = checked_add(d0.dist[st.bridge_y[j - 1]],
                                              g.edges[st.bridges[j - 1]].len);
                    detour = checked_add(detour, dd.dist[v]);
                    LDD_ENSURE(rat_of_i128(detour) <= (Rat(1) + eps) * rat_of_i128(din.dist[v]),
                               "star_decompose: detour above the tolerance");
                }
            }
            if (j == 0) d0 = std::move(dd);
        }
    }
    return out;
}

LsstForest lsst_recurse(const Subgraph& G, const std::vector<std::vector<NodeId>>& parts,
                        const std::vector<NodeId>& roots, int level,
                        const std::vector<i128>& mu_e, const Rat& eps, const Mode& mode,
                        const StarOptions& opt, OracleCtx* ctx) {
    LDD_REQUIRE(G.g != nullptr, "lsst_recurse: null graph");
    LDD_REQUIRE(level >= 1, "lsst_recurse: the level must be at least 1");
    LDD_REQUIRE(sgn(eps) > 0 && eps <= Rat(1, 10),
                "lsst_recurse: the precision must lie in (0, 1/10]");
    const WeightedGraph& g = *G.g;
    const int32_t n = g.n;
    const std::vector<int32_t> part_of = index_parts(G, parts, roots);
    Subgraph H = in_part_subgraph(G, part_of);
    const Rat bound = level >= 2 ? rat_pow(Rat(4, 3), (unsigned)(level - 2)) : Rat(3, 4);

    DistResult din = dijkstra_multi(H, roots, nullptr, INF128);
    for (NodeId v = 0; v < n; ++v) {
        if (!G.has_node(v)) continue;
        LDD_REQUIRE(din.reached(v), "lsst_recurse: a part is disconnected from its root");
        LDD_REQUIRE(rat_of_i128(din.dist[v]) <= bound,
                    "lsst_recurse: part radius above the level bound");
    }

    LsstForest out;
    out.roots = roots;
    out.in_forest.assign(g.edges.size(), 0);
    if (level == 1) {
        // Zero-diameter parts: span each with a breadth-first tree over its
        // zero-length edges, visiting neighbors in adjacency order.
        std::vector<char> seen(n, 0);
        std::vector<NodeId> queue;
        for (NodeId r : roots) {
            seen[r] = 1;
            queue.assign(1, r);
            for (size_t head = 0; head < queue.size(); ++head) {
                NodeId v = queue[head];
                for (int32_t a = g.adj_off[v]; a < g.adj_off[v + 1]; ++a) {
                    EdgeId e = g.adj_edge[a];
                    if (!H.has_edge(e) || g.edges[e].len != 0) continue;
                    NodeId w = g.other(e, v);
                    if (seen[w]) continue;
                    seen[w] = 1;
                    out.in_forest[e] = 1;
                    queue.push_back(w);
                }
            }
        }
    } else {
        StarResult st = star_decompose(G, parts, roots, bound, mu_e, eps, mode, opt, ctx);
        std::vector<std::vector<NodeId>> next_parts;
        std::vector<NodeId> next_roots;
        for (const StarPart& sp : st.stars)
            for (size_t j = 0; j < sp.parts.size(); ++j) {
                next_parts.push_back(sp.parts[j]);
                next_roots.push_back(sp.roots[j]);
            }
        LsstForest rec =
            lsst_recurse(G, next_parts, next_roots, level - 1, mu_e, eps, mode, opt, ctx);
        out.in_forest = std::move(rec.in_forest);
        for (const StarPart& sp : st.stars)
            for (EdgeId e : sp.bridges) out.in_forest[e] = 1;
    }

    finalize_forest(G, parts, part_of, &out);

    // The level's distance guarantee, exactly per node.
    const Rat factor = rat_pow(Rat(1) + eps, (unsigned)level);
    for (NodeId v = 0; v < n; ++v) {
        if (!G.has_node(v)) continue;
        LDD_ENSURE(rat_of_i128(out.depth_len[v]) <= factor * rat_of_i128(din.dist[v]),
                   "lsst_recurse: tree distance above the level tolerance");
    }
    return out;
}

LsstResult lsst(const Subgraph& G, const std::vector<i128>& mu_e, const Mode& mode,
                const LsstOptions& opt, OracleCtx* ctx) {
    LDD_REQUIRE(G.g != nullptr, "lsst: null graph");
    const WeightedGraph& g = *G.g;
    const int32_t n = g.n;
    LDD_REQUIRE((EdgeId)mu_e.size() == (EdgeId)g.edges.size(), "lsst: importance size mismatch");
    i128 active = G.count_nodes();
    LDD_REQUIRE(active > 0, "lsst: empty graph");
    int32_t ncomp = 0;
    components(G, &ncomp);
    LDD_REQUIRE(ncomp == 1, "lsst: the graph must be connected");

    Rat eps = opt.eps;
    if (sgn(eps) < 0) eps = std::min(Rat(1, 10), default_eps_log(active));
    LDD_REQUIRE(sgn(eps) > 0 && eps <= Rat(1, 10), "lsst: the precision must lie in (0, 1/10]");

    NodeId root = NO_NODE;
    std::vector<NodeId> active_list;
    for (NodeId v = 0; v < n; ++v)
        if (G.has_node(v)) {
            if (root == NO_NODE) root = v;
            active_list.push_back(v);
        }

    // The exact rooted radius, and the diameter (exact at desk scale, a
    // double-sweep lower bound above it).
    DistResult d0 = dijkstra_multi(G, {root}, nullptr, INF128);
    i128 rad = 0, diam = 0;
    NodeId far = root;
    for (NodeId v : active_list) {
        if (d0.dist[v] > rad) {
            rad = d0.dist[v];
            far = v;
        }
    }
    StretchReport rep;
    if (active <= 2000) {
        rep.diam_exact = true;
        for (NodeId s : active_list) {
            DistResult ds = dijkstra_multi(G, {s}, nullptr, INF128);
            for (NodeId v : active_list) diam = std::max(diam, ds.dist[v]);
        }
    } else {
        rep.diam_exact = false;
        DistResult ds = dijkstra_multi(G, {far}, nullptr, INF128);
        for (NodeId v : active_list) diam = std::max(diam, ds.dist[v]);
    }
    rep.diameter = diam;

    // The smallest level whose radius budget covers the diameter (and, when
    // the diameter is only a lower bound, at least the exact rooted radius).
    int level = 2;
    Rat budget_r(1);
    const Rat target = rat_of_i128(std::max<i128>(diam, 1));
    while (budget_r < target) {
        budget_r *= Rat(4, 3);
        ++level;
    }
    while (budget_r < rat_of_i128(rad)) {
        budget_r *= Rat(4, 3);
        ++level;
    }
    rep.level = level;

    LsstResult res;
    StarOptions sopt;
    sopt.dist = opt.dist;
    res.forest = lsst_recurse(G, {active_list}, {root}, level, mu_e, eps, mode, sopt, ctx);
    LDD_ENSURE((i128)res.forest.edges.size() == active - 1, "lsst: not a spanning tree");

    // Stretch report: exact tree distances per edge via nearest common
    // ancestors.
    std::vector<int32_t> hop(n, 0);
    {
        std::vector<std::vector<NodeId>> children(n);
        for (NodeId v : active_list)
            if (res.forest.parent[v] != NO_NODE) children[res.forest.parent[v]].push_back(v);
        std::vector<NodeId> queue(1, root);
        for (size_t head = 0; head < queue.size(); ++head) {
            NodeId v = queue[head];
            for (NodeId w : children[v]) {
                hop[w] = hop[v] + 1;
                queue.push_back(w);
            }
        }
    }
    Int tree_total = 0, edge_total = 0;
    for (EdgeId e = 0; e < (EdgeId)g.edges.size(); ++e) {
        if (!G.has_edge(e)) continue;
        NodeId u = g.edges[e].u, v = g.edges[e].v;
        while (hop[u] > hop[v]) u = res.forest.parent[u];
        while (hop[v] > hop[u]) v = res.forest.parent[v];
        while (u != v) {
            u = res.forest.parent[u];
            v = res.forest.parent[v];
        }
        i128 dt = checked_add(res.forest.depth_len[g.edges[e].u], res.forest.depth_len[g.edges[e].v]);
        dt -= 2 * res.forest.depth_len[u];
        tree_total += mpz_of_i128(mu_e[e]) * mpz_of_i128(dt);
        edge_total += mpz_of_i128(mu_e[e]) * mpz_of_i128(g.edges[e].len);
    }
    rep.tree_total = Rat(tree_total);
    rep.edge_total = Rat(edge_total);
    const long lg = (long)ceil_log2_at_least4(active);
    rep.budget = Rat(kLsstBudgetK) * rat_pow(Rat(lg), 5);
    rep.within_budget = rep.tree_total <= rep.budget * rep.edge_total;
    rep.ratio = sgn(rep.edge_total) > 0 ? rep.tree_total / rep.edge_total : Rat(0);
    res.report = rep;
    return res;
}

}  // namespace lddkit
