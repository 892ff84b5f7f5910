#include "artsim/oracle.hpp"

#include <stdexcept>

namespace artsim {

namespace {

struct Search {
    const Topology& t;
    NodeId dest;
    const std::set<std::pair<NodeId, NodeId>>& avoid_edges;
    const std::set<NodeId>& avoid_nodes;
    std::vector<char> on_path;
    std::vector<NodeId> current;
    std::int64_t current_cost = 0;
    std::optional<Path> best;

    bool edge_avoided(NodeId a, NodeId b) const {
        return avoid_edges.count({std::min(a, b), std::max(a, b)}) > 0;
    }

    void visit(NodeId x) {
        if (x == dest) {
            Path candidate{current, current_cost};
            if (!best || candidate.cost < best->cost ||
                (candidate.cost == best->cost && candidate.nodes < best->nodes))
                best = candidate;
            return;
        }
        for (NodeId k : t.neighbors(x)) {
            if (on_path[static_cast<size_t>(k)]) continue;
            if (k != dest && avoid_nodes.count(k)) continue;
            if (edge_avoided(x, k)) continue;
            const Edge& e = t.edge(t.edge_index(x, k));
            on_path[static_cast<size_t>(k)] = 1;
            current.push_back(k);
            current_cost += e.cost;
            visit(k);
            current_cost -= e.cost;
            current.pop_back();
            on_path[static_cast<size_t>(k)] = 0;
        }
    }
};

}  // namespace

std::optional<Path> brute_force_disjoint(const Topology& t, NodeId s, NodeId d,
                                         const std::set<std::pair<NodeId, NodeId>>& avoid_edges,
                                         const std::set<NodeId>& avoid_interior_nodes) {
    if (t.node_count() > 12)
        throw std::invalid_argument("instance too large for exhaustive enumeration");
    if (s == d) return std::nullopt;
    Search search{t, d, avoid_edges, avoid_interior_nodes, {}, {}, 0, std::nullopt};
    search.on_path.assign(static_cast<size_t>(t.node_count()), 0);
    search.on_path[static_cast<size_t>(s)] = 1;
    search.current.push_back(s);
    search.visit(s);
    return search.best;
}

}  // namespace artsim
