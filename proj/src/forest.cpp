#include "lddkit/forest.hpp"

#include <algorithm>

#include "lddkit/errors.hpp"

namespace lddkit {

std::vector<NodeId> RootedForest::topo_order() const {
    std::vector<std::vector<NodeId>> children(g->n);
    for (NodeId v = 0; v < g->n; ++v)
        if (in(v) && parent[v] != NO_NODE) children[parent[v]].push_back(v);
    std::vector<NodeId> order;
    order.reserve(g->n);
    std::vector<NodeId> stack(roots.rbegin(), roots.rend());
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        order.push_back(v);
        for (auto it = children[v].rbegin(); it != children[v].rend(); ++it)
            stack.push_back(*it);
    }
    return order;
}

void RootedForest::validate() const {
    std::vector<NodeId> order = topo_order();
    size_t members = 0;
    for (NodeId v = 0; v < g->n; ++v) members += in(v);
    LDD_ENSURE(order.size() == members, "forest has parent cycles or orphan members");
    for (NodeId r : roots) {
        LDD_ENSURE(in(r) && parent[r] == NO_NODE && dF[r] == 0 && root[r] == r,
                   "malformed forest root");
    }
    for (NodeId v : order) {
        if (parent[v] == NO_NODE) continue;
        NodeId p = parent[v];
        LDD_ENSURE(in(p), "parent outside forest");
        EdgeId e = link_edge[v];
        LDD_ENSURE(e >= 0 && ((g->edges[e].u == p && g->edges[e].v == v) ||
                              (g->edges[e].u == v && g->edges[e].v == p)),
                   "link edge does not join node and parent");
        LDD_ENSURE(dF[v] == checked_add(dF[p], g->edges[e].len),
                   "dF inconsistent with edge lengths");
        LDD_ENSURE(root[v] == root[p], "root disagrees with parent");
    }
}

AggResult forest_aggregate(const RootedForest& F, const std::vector<i128>& x, AggOp op) {
    const i128 identity = op == AggOp::Sum ? 0 : INF128;
    auto combine = [op](i128 a, i128 b) {
        if (op == AggOp::Sum) return checked_add(a, b);
        return a < b ? a : b;
    };
    AggResult out;
    out.anc.assign(F.g->n, identity);
    out.desc.assign(F.g->n, identity);
    std::vector<NodeId> order = F.topo_order();
    for (NodeId v : order) {
        NodeId p = F.parent[v];
        if (p != NO_NODE) out.anc[v] = combine(out.anc[p], x[p]);
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        NodeId v = *it;
        NodeId p = F.parent[v];
        if (p != NO_NODE) out.desc[p] = combine(out.desc[p], combine(out.desc[v], x[v]));
    }
    return out;
}

} // namespace lddkit
