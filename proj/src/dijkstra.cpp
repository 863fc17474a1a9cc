#include "lddkit/dijkstra.hpp"

#include <algorithm>
#include <queue>

#include "lddkit/errors.hpp"

namespace lddkit {

namespace {

// Label-correcting relaxation to the least fixpoint of
//   label(v) = min_lex { (del(q), id(q), 0, 0) : v = q in S }
//           cup { (label(u).d + len, label(u).src_id, label(u).hops + 1,
//                  id(u)+1) : active u-v }.
// Pure Dijkstra label-setting is wrong for the predecessor tie-break in the
// presence of zero-length edges, so improvements re-enter the queue; the
// result is order-independent and hence deterministic. The hop count sits
// above the predecessor rank so that parent chains strictly increase in hops:
// without it, two nodes at equal distance joined by a zero-length edge could
// each adopt the other as predecessor and leave a cycle in the tree.
template <class W>
struct Engine {
    struct Label {
        W d;
        uint64_t src_id;
        uint64_t hops;
        uint64_t pred_rank; // 0 for source-initial labels, id+1 otherwise

        bool operator<(const Label& o) const {
            if (d != o.d) return d < o.d;
            if (src_id != o.src_id) return src_id < o.src_id;
            if (hops != o.hops) return hops < o.hops;
            return pred_rank < o.pred_rank;
        }
    };
    struct Item {
        Label lab;
        NodeId v;
        bool operator>(const Item& o) const {
            if (o.lab < lab) return true;
            if (lab < o.lab) return false;
            return v > o.v;
        }
    };

    static void run(const Subgraph& sg, const std::vector<NodeId>& S,
                    const std::vector<W>& del, const W* cap,
                    const std::vector<W>& scaled_len, std::vector<char>& reached,
                    std::vector<W>& dist, std::vector<NodeId>& pred,
                    std::vector<NodeId>& root) {
        const WeightedGraph& g = *sg.g;
        reached.assign(g.n, 0);
        dist.assign(g.n, W(0));
        pred.assign(g.n, NO_NODE);
        root.assign(g.n, NO_NODE);
        std::vector<Label> state(g.n);
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;

        for (size_t i = 0; i < S.size(); ++i) {
            NodeId q = S[i];
            LDD_REQUIRE(sg.has_node(q), "source node not in subgraph");
            Label cand{del[i], g.ids[q], 0, 0};
            if (cap && *cap < cand.d) continue;
            if (!reached[q] || cand < state[q]) {
                reached[q] = 1;
                state[q] = cand;
                pq.push(Item{cand, q});
            }
        }
        while (!pq.empty()) {
            Item it = pq.top();
            pq.pop();
            NodeId v = it.v;
            if (!reached[v] || state[v] < it.lab) continue; // stale
            for (int32_t a = g.adj_off[v]; a < g.adj_off[v + 1]; ++a) {
                EdgeId e = g.adj_edge[a];
                if (!sg.has_edge(e)) continue;
                NodeId w = g.other(e, v);
                Label cand{it.lab.d + scaled_len[e], it.lab.src_id, it.lab.hops + 1,
                           g.ids[v] + 1};
                if (cap && *cap < cand.d) continue;
                if (!reached[w] || cand < state[w]) {
                    reached[w] = 1;
                    state[w] = cand;
                    pq.push(Item{cand, w});
                }
            }
        }
        // Recover predecessor and root nodes from the ids in the labels.
        std::vector<std::pair<uint64_t, NodeId>> id2node(g.n);
        for (NodeId v = 0; v < g.n; ++v) id2node[v] = {g.ids[v], v};
        std::sort(id2node.begin(), id2node.end());
        auto node_of_id = [&](uint64_t id) -> NodeId {
            auto itr = std::lower_bound(id2node.begin(), id2node.end(),
                                        std::make_pair(id, (NodeId)-1));
            return itr->second;
        };
        for (NodeId v = 0; v < g.n; ++v) {
            if (!reached[v]) continue;
            dist[v] = state[v].d;
            pred[v] = state[v].pred_rank == 0 ? NO_NODE : node_of_id(state[v].pred_rank - 1);
            root[v] = node_of_id(state[v].src_id);
        }
    }
};

} // namespace

DistResult dijkstra_multi(const Subgraph& g, const std::vector<NodeId>& S,
                          const std::vector<i128>* del, i128 cap) {
    LDD_REQUIRE(!S.empty(), "dijkstra_multi: empty source set");
    std::vector<i128> dels(S.size(), 0);
    if (del) {
        for (size_t i = 0; i < S.size(); ++i) {
            dels[i] = (*del)[S[i]];
            LDD_REQUIRE(dels[i] >= 0, "negative delay");
        }
    }
    std::vector<i128> lens(g.g->edges.size());
    for (size_t e = 0; e < lens.size(); ++e) lens[e] = g.g->edges[e].len;
    std::vector<char> reached;
    std::vector<i128> dist;
    DistResult out;
    const i128* capp = cap == INF128 ? nullptr : &cap;
    Engine<i128>::run(g, S, dels, capp, lens, reached, dist, out.pred, out.root);
    out.dist.assign(g.g->n, INF128);
    for (NodeId v = 0; v < g.g->n; ++v)
        if (reached[v]) out.dist[v] = dist[v];
    return out;
}

RatDistResult delayed_dist(const Subgraph& g, const std::vector<NodeId>& S,
                           const std::vector<Rat>* del, const Rat* cap,
                           const std::vector<Rat>* lens_override) {
    LDD_REQUIRE(!S.empty(), "delayed_dist: empty source set");
    const WeightedGraph& G = *g.g;
    // Common denominator over source delays, the cap, and length overrides.
    Int denom = 1;
    if (del)
        for (NodeId q : S) {
            LDD_REQUIRE(sgn((*del)[q]) >= 0, "negative delay");
            mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(), (*del)[q].get_den().get_mpz_t());
        }
    if (cap) mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(), cap->get_den().get_mpz_t());
    if (lens_override)
        for (EdgeId e = 0; e < (EdgeId)G.edges.size(); ++e) {
            if (!g.has_edge(e)) continue;
            LDD_REQUIRE(sgn((*lens_override)[e]) >= 0, "negative length override");
            mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(),
                    (*lens_override)[e].get_den().get_mpz_t());
        }

    std::vector<Int> dels(S.size(), 0);
    if (del)
        for (size_t i = 0; i < S.size(); ++i) {
            Rat scaled = (*del)[S[i]] * Rat(denom);
            dels[i] = scaled.get_num(); // exact: denominator divides denom
        }
    Int capz;
    if (cap) capz = Rat(*cap * Rat(denom)).get_num();
    std::vector<Int> zlens(G.edges.size(), 0);
    for (EdgeId e = 0; e < (EdgeId)G.edges.size(); ++e) {
        if (!g.has_edge(e)) continue; // never traversed; keep out of the bound
        if (lens_override) {
            Rat scaled = (*lens_override)[e] * Rat(denom);
            zlens[e] = scaled.get_num();
        } else {
            zlens[e] = mpz_of_i128(G.edges[e].len) * denom;
        }
    }

    // Size estimate to pick the 128-bit fast path: any reachable scaled
    // distance is at most total scaled length plus the largest delay.
    Int bound = 0;
    for (const Int& l : zlens) bound += l;
    Int extra = 0;
    for (const Int& d : dels) extra = std::max(extra, d);
    if (cap) extra = std::max(extra, capz);
    bound += extra;

    RatDistResult out;
    if (mpz_sizeinbase(bound.get_mpz_t(), 2) <= 120) {
        std::vector<i128> idels(S.size());
        for (size_t i = 0; i < S.size(); ++i) idels[i] = i128_of_mpz(dels[i]);
        std::vector<i128> lens(G.edges.size());
        for (size_t e = 0; e < lens.size(); ++e) lens[e] = i128_of_mpz(zlens[e]);
        i128 icap = cap ? i128_of_mpz(capz) : 0;
        std::vector<i128> dist;
        Engine<i128>::run(g, S, idels, cap ? &icap : nullptr, lens, out.reached, dist,
                          out.pred, out.root);
        out.dist.assign(G.n, Rat(0));
        for (NodeId v = 0; v < G.n; ++v)
            if (out.reached[v]) {
                out.dist[v] = Rat(mpz_of_i128(dist[v])) / Rat(denom);
                out.dist[v].canonicalize();
            }
    } else {
        std::vector<Int> dist;
        Engine<Int>::run(g, S, dels, cap ? &capz : nullptr, zlens, out.reached, dist,
                         out.pred, out.root);
        out.dist.assign(G.n, Rat(0));
        for (NodeId v = 0; v < G.n; ++v)
            if (out.reached[v]) {
                out.dist[v] = Rat(dist[v]) / Rat(denom);
                out.dist[v].canonicalize();
            }
    }
    return out;
}

} // namespace lddkit
