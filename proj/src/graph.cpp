#include "lddkit/graph.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "lddkit/config.hpp"
#include "lddkit/errors.hpp"

namespace lddkit {

namespace {

int bit_length(uint64_t v) {
    int b = 0;
    while (v > 0) {
        v >>= 1;
        ++b;
    }
    return b;
}

int required_bits(const WeightedGraph& g) {
    uint64_t mx = 0;
    for (uint64_t id : g.ids) mx = std::max(mx, id);
    int b = std::max(1, bit_length(mx));
    // Default width is ceil(log2 n); explicit wider ids win.
    int from_n = g.n <= 1 ? 1 : bit_length((uint64_t)g.n - 1);
    return std::max(b, from_n);
}

} // namespace

EdgeId WeightedGraph::find_edge(NodeId a, NodeId b) const {
    if (a > b) std::swap(a, b);
    auto it = std::lower_bound(edges.begin(), edges.end(), std::make_pair(a, b),
                               [](const Edge& e, const std::pair<NodeId, NodeId>& key) {
                                   if (e.u != key.first) return e.u < key.first;
                                   return e.v < key.second;
                               });
    if (it == edges.end() || it->u != a || it->v != b) return -1;
    return (EdgeId)(it - edges.begin());
}

uint64_t WeightedGraph::max_len_bound() const {
    unsigned __int128 bound = 1;
    for (int i = 0; i < kMaxLenExponent; ++i) {
        bound *= (unsigned __int128)std::max<int64_t>(n, 2);
        if (bound > (unsigned __int128)UINT64_MAX) return UINT64_MAX;
    }
    return (uint64_t)bound;
}

void WeightedGraph::finalize() {
    for (Edge& e : edges) {
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        if (a.u != b.u) return a.u < b.u;
        if (a.v != b.v) return a.v < b.v;
        return a.len < b.len;
    });
    // Parallel edges collapse to the minimum length.
    std::vector<Edge> out;
    for (const Edge& e : edges) {
        if (!out.empty() && out.back().u == e.u && out.back().v == e.v) continue;
        out.push_back(e);
    }
    edges = std::move(out);
    bits = required_bits(*this);

    adj_off.assign(n + 1, 0);
    for (const Edge& e : edges) {
        ++adj_off[e.u + 1];
        ++adj_off[e.v + 1];
    }
    for (int32_t i = 0; i < n; ++i) adj_off[i + 1] += adj_off[i];
    adj_edge.assign(adj_off[n], 0);
    std::vector<int32_t> cursor(adj_off.begin(), adj_off.end() - 1);
    for (EdgeId e = 0; e < (EdgeId)edges.size(); ++e) {
        adj_edge[cursor[edges[e].u]++] = e;
        adj_edge[cursor[edges[e].v]++] = e;
    }
}

Subgraph Subgraph::restrict_nodes(const std::vector<char>& keep) const {
    Subgraph out = *this;
    for (NodeId v = 0; v < g->n; ++v)
        if (!keep[v]) out.node_on[v] = 0;
    return out;
}

std::vector<NodeId> Subgraph::node_list() const {
    std::vector<NodeId> vs;
    for (NodeId v = 0; v < g->n; ++v)
        if (node_on[v]) vs.push_back(v);
    return vs;
}

WeightedGraph parse_graph(const std::string& text, const std::string& origin) {
    WeightedGraph g;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool have_header = false;
    int64_t declared_m = 0, seen_m = 0;
    std::vector<char> id_set;

    auto fail = [&](const std::string& what) -> void {
        throw ParseError(origin + ":" + std::to_string(lineno) + ": " + what);
    };

    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "p") {
            if (have_header) fail("duplicate header line");
            int64_t n = 0;
            if (!(ls >> n >> declared_m)) fail("malformed header, expected 'p <n> <m>'");
            if (n < 1) fail("node count must be at least 1");
            if (n > 100000000) fail("node count too large");
            if (declared_m < 0) fail("negative edge count");
            g.n = (int32_t)n;
            g.ids.resize(g.n);
            for (int32_t i = 0; i < g.n; ++i) g.ids[i] = (uint64_t)i;
            id_set.assign(g.n, 0);
            have_header = true;
        } else if (tag == "v") {
            if (!have_header) fail("'v' line before header");
            int64_t idx = 0;
            std::string id_str;
            if (!(ls >> idx >> id_str)) fail("malformed id line, expected 'v <index> <id>'");
            if (idx < 0 || idx >= g.n) fail("node index out of range");
            if (id_set[idx]) fail("duplicate id line for node " + std::to_string(idx));
            i128 id = 0;
            try {
                id = parse_i128(id_str);
            } catch (const std::exception&) {
                fail("bad identifier '" + id_str + "'");
            }
            if (id < 0) fail("negative identifier");
            if (id > (i128)UINT64_MAX >> 2) fail("identifier too large");
            id_set[idx] = 1;
            g.ids[idx] = (uint64_t)id;
        } else if (tag == "e") {
            if (!have_header) fail("'e' line before header");
            int64_t u = 0, v = 0;
            std::string len_str;
            if (!(ls >> u >> v >> len_str)) fail("malformed edge line, expected 'e <u> <v> <len>'");
            if (u < 0 || u >= g.n || v < 0 || v >= g.n) fail("edge endpoint out of range");
            if (u == v) fail("self-loop at node " + std::to_string(u));
            i128 len = 0;
            try {
                len = parse_i128(len_str);
            } catch (const std::exception&) {
                fail("bad edge length '" + len_str + "'");
            }
            if (len < 0) fail("negative edge length");
            if (len > (i128)g.max_len_bound())
                fail("edge length exceeds n^" + std::to_string(kMaxLenExponent));
            g.edges.push_back(Edge{(NodeId)u, (NodeId)v, len});
            ++seen_m;
        } else {
            fail("unknown line tag '" + tag + "'");
        }
        std::string junk;
        if (ls >> junk) fail("trailing garbage '" + junk + "'");
    }
    if (!have_header) {
        lineno = 0;
        fail("missing 'p <n> <m>' header");
    }
    if (seen_m != declared_m) {
        lineno = 0;
        fail("header declares " + std::to_string(declared_m) + " edges, file has " +
             std::to_string(seen_m));
    }
    std::set<uint64_t> uniq(g.ids.begin(), g.ids.end());
    if ((int64_t)uniq.size() != g.n) {
        lineno = 0;
        fail("identifiers are not pairwise distinct");
    }
    g.finalize();
    return g;
}

WeightedGraph load_graph(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open graph file: " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_graph(buf.str(), path);
}

std::string save_graph(const WeightedGraph& g) {
    std::ostringstream out;
    out << "p " << g.n << " " << g.edges.size() << "\n";
    bool default_ids = true;
    for (NodeId v = 0; v < g.n; ++v)
        if (g.ids[v] != (uint64_t)v) default_ids = false;
    if (!default_ids)
        for (NodeId v = 0; v < g.n; ++v) out << "v " << v << " " << g.ids[v] << "\n";
    for (const Edge& e : g.edges)
        out << "e " << e.u << " " << e.v << " " << to_string(e.len) << "\n";
    return out.str();
}

void write_graph(const WeightedGraph& g, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write graph file: " + path);
    f << save_graph(g);
}

Subdivision subdivide(const WeightedGraph& g) {
    Subdivision out;
    WeightedGraph& s = out.graph;
    s.n = g.n + (int32_t)g.edges.size();
    s.ids = g.ids;
    s.ids.resize(s.n);
    uint64_t base = 1ULL << g.bits;
    out.edge_node.resize(g.edges.size());
    for (EdgeId e = 0; e < (EdgeId)g.edges.size(); ++e) {
        NodeId ve = g.n + e;
        s.ids[ve] = base + (uint64_t)e;
        out.edge_node[e] = ve;
        const Edge& ed = g.edges[e];
        NodeId lo = g.ids[ed.u] < g.ids[ed.v] ? ed.u : ed.v;
        NodeId hi = lo == ed.u ? ed.v : ed.u;
        s.edges.push_back(Edge{lo, ve, 0});
        s.edges.push_back(Edge{ve, hi, ed.len});
    }
    s.finalize();
    return out;
}

std::vector<int32_t> components(const Subgraph& sg, int32_t* count) {
    const WeightedGraph& g = *sg.g;
    std::vector<int32_t> comp(g.n, -1);
    int32_t next = 0;
    std::vector<NodeId> stack;
    for (NodeId start = 0; start < g.n; ++start) {
        if (!sg.node_on[start] || comp[start] >= 0) continue;
        comp[start] = next;
        stack.push_back(start);
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            for (int32_t i = g.adj_off[v]; i < g.adj_off[v + 1]; ++i) {
                EdgeId e = g.adj_edge[i];
                if (!sg.has_edge(e)) continue;
                NodeId w = g.other(e, v);
                if (comp[w] < 0) {
                    comp[w] = next;
                    stack.push_back(w);
                }
            }
        }
        ++next;
    }
    if (count) *count = next;
    return comp;
}

} // namespace lddkit
