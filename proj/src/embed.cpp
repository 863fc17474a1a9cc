#include "lddkit/embed.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "lddkit/clustering.hpp"
#include "lddkit/config.hpp"
#include "lddkit/dijkstra.hpp"
#include "lddkit/errors.hpp"

namespace lddkit {

namespace {

// Arbitrary fixed public constants; the repetition code XORs the identifier
// against these masks (folded to b bits), one per block.
constexpr uint64_t kCodeMasks[10] = {
    0x428a2f98d728ae22ULL, 0x7137449123ef65cdULL, 0xb5c0fbcfec4d3b2fULL,
    0xe9b5dba58189dbbcULL, 0x3956c25bf348b538ULL, 0x59f111f1b605d019ULL,
    0x923f82a4af194f9bULL, 0xab1c5ed5da6d8118ULL, 0xd807aa98a3030242ULL,
    0x12835b0145706fbeULL,
};

uint64_t low_bits_mask(int b) { return b >= 64 ? ~0ULL : (1ULL << b) - 1; }

// XOR-fold a 64-bit constant down to b bits.
uint64_t fold_mask(uint64_t x, int b) {
    uint64_t out = 0;
    for (int off = 0; off < 64; off += b) out ^= x >> off;
    return out & low_bits_mask(b);
}

int weight_between(const std::vector<char>& a, const std::vector<char>& b) {
    int w = 0;
    for (size_t i = 0; i < a.size(); ++i) w += a[i] != b[i];
    return w;
}

} // namespace

ClusterCode raw_id_code(int b) {
    LDD_REQUIRE(b >= 1 && b <= 64, "raw_id_code: width out of range");
    ClusterCode code;
    code.b = b;
    code.m = b;
    code.distance = 1;
    code.encode = [b](uint64_t id) {
        LDD_REQUIRE((id & ~low_bits_mask(b)) == 0, "cluster identifier wider than the code");
        std::vector<char> out(b);
        for (int p = 0; p < b; ++p) out[p] = (char)((id >> p) & 1);
        return out;
    };
    verify_code(code);
    return code;
}

ClusterCode repetition_code(int b) {
    LDD_REQUIRE(b >= 1 && b <= 64, "repetition_code: width out of range");
    ClusterCode code;
    code.b = b;
    code.m = 10 * b;
    code.distance = 10;
    code.encode = [b](uint64_t id) {
        LDD_REQUIRE((id & ~low_bits_mask(b)) == 0, "cluster identifier wider than the code");
        std::vector<char> out(10 * b);
        for (int k = 0; k < 10; ++k) {
            uint64_t block = id ^ fold_mask(kCodeMasks[k], b);
            for (int j = 0; j < b; ++j) out[k * b + j] = (char)((block >> j) & 1);
        }
        return out;
    };
    verify_code(code);
    return code;
}

void verify_code(const ClusterCode& code) {
    LDD_REQUIRE(code.b >= 1 && code.b <= 64, "verify_code: width out of range");
    LDD_REQUIRE(code.m >= 1, "verify_code: empty label");
    LDD_REQUIRE(code.distance >= 1, "verify_code: distance must be positive");
    LDD_REQUIRE(code.encode != nullptr, "verify_code: missing encoder");
    const uint64_t idmask = low_bits_mask(code.b);
    const std::vector<char> zero = code.encode(0);
    LDD_ENSURE((int)zero.size() == code.m, "code label width disagrees with its declaration");

    auto check_delta = [&](uint64_t delta) {
        std::vector<char> lab = code.encode(delta);
        LDD_ENSURE((int)lab.size() == code.m, "code label width disagrees with its declaration");
        LDD_ENSURE(weight_between(zero, lab) >= code.distance,
                   "a pair of identifiers violates the declared code distance");
    };

    // The pair (x, x^delta) has the same label difference as (0, delta) when
    // the code is affine over GF(2); spot-check that before leaning on it to
    // cover all pairs by enumerating differences.
    SplitRng rng(0x10ab5c0d);
    for (int trial = 0; trial < 64; ++trial) {
        uint64_t x = rng.next() & idmask;
        uint64_t delta = rng.next() & idmask;
        if (delta == 0) delta = 1;
        std::vector<char> at_x = code.encode(x);
        std::vector<char> shifted = code.encode(x ^ delta);
        std::vector<char> at_delta = code.encode(delta);
        for (int p = 0; p < code.m; ++p)
            LDD_ENSURE((at_x[p] != shifted[p]) == (zero[p] != at_delta[p]),
                       "code is not affine, so difference checks do not cover all pairs");
    }

    if (code.b <= 14) {
        for (uint64_t delta = 1; delta <= idmask; ++delta) check_delta(delta);
    } else {
        // Single-bit differences are the minimum-weight ones for the shipped
        // codes; add a fixed-seed sample on top.
        for (int j = 0; j < code.b; ++j) check_delta(1ULL << j);
        for (int s = 0; s < 4096; ++s) {
            uint64_t delta = rng.next() & idmask;
            if (delta != 0) check_delta(delta);
        }
    }
}

Embedding l1_embed(const Subgraph& G, const EmbedOptions& opt, OracleCtx* ctx) {
    LDD_REQUIRE(G.g != nullptr, "l1_embed: null graph");
    const WeightedGraph& g = *G.g;
    const int32_t n = g.n;
    const i128 active = G.count_nodes();
    LDD_REQUIRE(active >= 1, "l1_embed: empty graph");
    int32_t comp_count = 0;
    components(G, &comp_count);
    LDD_REQUIRE(comp_count == 1, "l1_embed: graph is disconnected");

    i128 lmax = 1;
    for (EdgeId e = 0; e < (EdgeId)g.edges.size(); ++e) {
        if (!G.has_edge(e)) continue;
        LDD_REQUIRE(g.edges[e].len >= 1, "l1_embed: zero-length edge");
        lmax = std::max(lmax, g.edges[e].len);
    }

    ClusterCode code = opt.code ? *opt.code : raw_id_code(g.bits);
    LDD_REQUIRE(code.b >= g.bits, "l1_embed: code too narrow for the node identifiers");
    const int m = code.m;

    const long imax = ceil_log2_rat(rat_of_i128(checked_mul(active, lmax)));
    LDD_REQUIRE(imax < 120, "l1_embed: length range out of bounds");
    const int t = opt.rounds > 0 ? opt.rounds
                                 : (int)(kCoverRoundFactor * (long)ceil_log2_at_least4(active));

    // Sparse covers for the integer scales; q is the measured diameter
    // factor, maximized over every partition of every scale.
    CoverOptions co;
    co.eps = opt.eps;
    co.dist = opt.dist;
    co.rounds = opt.rounds;
    std::vector<SparseCover> covers;
    covers.reserve((size_t)(imax + 1));
    Rat q(1);
    for (long i = 0; i <= imax; ++i) {
        i128 D = (i128)1 << (unsigned)i;
        covers.push_back(sparse_cover(G, D, opt.mode, co, ctx));
        LDD_ENSURE(covers.back().t == t, "l1_embed: partition count drifted across scales");
        for (const PaddedPartition& p : covers.back().rounds) {
            Rat ratio = p.diameter_bound / rat_of_i128(D);
            if (q < ratio) q = ratio;
        }
    }
    const long imin = -(std::max(0L, ceil_log2_rat(q)) + 1);

    Embedding out;
    out.code = code;
    out.q = q;
    out.t = t;
    const long long wide_dims = (long long)(imax - imin + 1) * t * m;
    LDD_REQUIRE(wide_dims <= (1LL << 30), "l1_embed: dimension out of range");
    out.dims = (int)wide_dims;
    out.x.assign(n, std::vector<i128>(out.dims, 0));
    out.provenance.reserve((size_t)out.dims);

    // Scales with D < 1 share one singleton partition: every ball of radius
    // below the minimum edge length is a single node, hence always padded.
    const std::vector<NodeId> act = G.node_list();
    EmbedPartition singleton;
    singleton.cluster_of.assign(n, -1);
    singleton.padded.assign(n, 0);
    singleton.label.reserve(act.size());
    for (size_t c = 0; c < act.size(); ++c) {
        singleton.cluster_of[act[c]] = (int32_t)c;
        singleton.padded[act[c]] = 1;
        singleton.label.push_back(code.encode(g.ids[act[c]]));
    }

    std::map<std::vector<char>, std::vector<i128>> pot_cache;
    auto potential_for = [&](const std::vector<char>& mask) -> const std::vector<i128>& {
        auto it = pot_cache.find(mask);
        if (it != pot_cache.end()) return it->second;
        std::vector<NodeId> S;
        for (NodeId v = 0; v < n; ++v)
            if (mask[v]) S.push_back(v);
        std::vector<i128> phi = potential_oracle(G, S, Rat(1), ctx);
        return pot_cache.emplace(mask, std::move(phi)).first->second;
    };

    int coord = 0;
    for (long i = imin; i <= imax; ++i) {
        EmbedScale sc;
        sc.index = (int)i;
        sc.D = i >= 0 ? Rat(Int(1) << (unsigned long)i)
                      : Rat(Int(1), Int(1) << (unsigned long)(-i));
        sc.D.canonicalize();
        for (int j = 0; j < t; ++j) {
            EmbedPartition part;
            if (i < 0) {
                part = singleton;
            } else {
                const PaddedPartition& pp = covers[(size_t)i].rounds[j];
                part.cluster_of = pp.cluster_of;
                part.padded = covers[(size_t)i].padded[j];
                part.label.reserve(pp.clusters.size());
                for (const std::vector<NodeId>& members : pp.clusters) {
                    uint64_t min_id = g.ids[members.front()];
                    for (NodeId v : members) min_id = std::min(min_id, g.ids[v]);
                    part.label.push_back(code.encode(min_id));
                }
            }
            part.coord_base = coord;
            for (int p = 0; p < m; ++p, ++coord) {
                std::vector<char> mask(n, 0);
                bool nonempty = false;
                for (NodeId v : act)
                    if (!part.label[part.cluster_of[v]][p]) {
                        mask[v] = 1;
                        nonempty = true;
                    }
                if (nonempty) {
                    const std::vector<i128>& phi = potential_for(mask);
                    for (NodeId v : act) out.x[v][coord] = phi[v];
                }
                out.provenance.push_back({(int)i, j, p});
            }
            sc.parts.push_back(std::move(part));
        }
        out.scales.push_back(std::move(sc));
    }
    LDD_ENSURE(coord == out.dims, "l1_embed: coordinate count disagrees with the dimension");

    // Exact per-edge Lipschitz check for every coordinate.
    for (EdgeId e = 0; e < (EdgeId)g.edges.size(); ++e) {
        if (!G.has_edge(e)) continue;
        const Edge& ed = g.edges[e];
        for (int c = 0; c < out.dims; ++c) {
            i128 diff = out.x[ed.u][c] - out.x[ed.v][c];
            if (diff < 0) diff = -diff;
            LDD_ENSURE(diff <= ed.len, "l1_embed: a coordinate stretches an edge");
        }
    }
    return out;
}

namespace {

// The lower-bound certificate for one pair at distance d: a bracketing scale
// exists, enough partitions pad both endpoints into distinct clusters, and
// every differing label bit contributes a coordinate gap of at least D/2.
void certify_pair(const Embedding& E, NodeId u, NodeId v, i128 d) {
    const Rat target = rat_of_i128(d) / E.q;
    size_t idx = E.scales.size();
    for (size_t k = 0; k < E.scales.size(); ++k) {
        if (E.scales[k].D < target)
            idx = k;
        else
            break;
    }
    LDD_ENSURE(idx != E.scales.size(), "distortion_report: no scale below d/q for a pair");
    LDD_ENSURE(idx + 1 < E.scales.size(), "distortion_report: bracketing scale missing");
    const EmbedScale& sc = E.scales[idx];
    int padded_both = 0;
    for (const EmbedPartition& part : sc.parts) {
        if (!part.padded[u] || !part.padded[v]) continue;
        const int32_t cu = part.cluster_of[u], cv = part.cluster_of[v];
        LDD_ENSURE(cu >= 0 && cv >= 0 && cu != cv,
                   "distortion_report: padded endpoints share a cluster below the "
                   "separation scale");
        int diff_bits = 0;
        for (int p = 0; p < E.code.m; ++p) {
            if (part.label[cu][p] == part.label[cv][p]) continue;
            ++diff_bits;
            i128 gap = E.x[u][part.coord_base + p] - E.x[v][part.coord_base + p];
            if (gap < 0) gap = -gap;
            LDD_ENSURE(Rat(2) * rat_of_i128(gap) >= sc.D,
                       "distortion_report: coordinate gap below half the scale");
        }
        LDD_ENSURE(diff_bits >= E.code.distance,
                   "distortion_report: labels differ in fewer bits than the code distance");
        ++padded_both;
    }
    LDD_ENSURE(padded_both >= (E.t + 2) / 3,
               "distortion_report: too few doubly padded partitions at the bracketing scale");
}

} // namespace

DistortionReport distortion_report(const Subgraph& G, const Embedding& E, OracleCtx* ctx) {
    (void)ctx;
    LDD_REQUIRE(G.g != nullptr, "distortion_report: null graph");
    const WeightedGraph& g = *G.g;
    const int32_t n = g.n;
    LDD_REQUIRE((int32_t)E.x.size() == n, "distortion_report: embedding size mismatch");
    LDD_REQUIRE(E.t >= 1 && !E.scales.empty(), "distortion_report: empty embedding");
    for (const EmbedScale& sc : E.scales)
        LDD_REQUIRE((int)sc.parts.size() == E.t, "distortion_report: partition count mismatch");
    int32_t comp_count = 0;
    components(G, &comp_count);
    LDD_REQUIRE(comp_count == 1, "distortion_report: graph is disconnected");
    const std::vector<NodeId> act = G.node_list();
    for (NodeId v : act)
        LDD_REQUIRE((int)E.x[v].size() == E.dims, "distortion_report: embedding size mismatch");

    DistortionReport rep;
    rep.max_expansion = Rat(0);
    rep.max_contraction = Rat(0);
    rep.exact = (i128)act.size() <= 512;

    auto test_pair = [&](NodeId u, NodeId v, i128 d) {
        Int norm = 0;
        for (int c = 0; c < E.dims; ++c) {
            i128 diff = E.x[u][c] - E.x[v][c];
            if (diff < 0) diff = -diff;
            norm += mpz_of_i128(diff);
        }
        certify_pair(E, u, v, d);
        LDD_ENSURE(sgn(norm) > 0, "distortion_report: embedded pair collapsed to one point");
        Rat expansion = Rat(norm) / rat_of_i128(d);
        if (expansion > rep.max_expansion) {
            rep.max_expansion = expansion;
            rep.expansion = {u, v, expansion};
        }
        Rat contraction = rat_of_i128(d) / Rat(norm);
        if (contraction > rep.max_contraction) {
            rep.max_contraction = contraction;
            rep.contraction = {u, v, contraction};
        }
        ++rep.pairs_tested;
    };

    if (rep.exact) {
        for (size_t a = 0; a < act.size(); ++a) {
            if (a + 1 == act.size()) break;
            DistResult dr = dijkstra_multi(G, {act[a]}, nullptr, INF128);
            for (size_t b = a + 1; b < act.size(); ++b) test_pair(act[a], act[b], dr.dist[act[b]]);
        }
    } else {
        SplitRng rng(0x5a3b1ed1);
        std::vector<NodeId> sources = act;
        for (size_t a = sources.size(); a > 1; --a)
            std::swap(sources[a - 1], sources[rng.below(a)]);
        sources.resize(512);
        for (NodeId u : sources) {
            DistResult dr = dijkstra_multi(G, {u}, nullptr, INF128);
            for (int s = 0; s < 256; ++s) {
                NodeId v = act[rng.below(act.size())];
                if (v != u) test_pair(u, v, dr.dist[v]);
            }
        }
    }
    return rep;
}

} // namespace lddkit
