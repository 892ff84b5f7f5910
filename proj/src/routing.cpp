#include "artsim/routing.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

namespace artsim {

RoutingTable build_routing_tables(const Topology& t) {
    const int n = t.node_count();
    RoutingTable tr(n);

    std::vector<std::int64_t> dist(static_cast<size_t>(n));
    std::vector<NodeId> prev(static_cast<size_t>(n));
    std::vector<char> done(static_cast<size_t>(n));

    for (NodeId s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), kInfDist);
        std::fill(prev.begin(), prev.end(), kNoNode);
        std::fill(done.begin(), done.end(), 0);
        dist[static_cast<size_t>(s)] = 0;

        using Item = std::pair<std::int64_t, NodeId>;  // (dist, node), min-heap
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        pq.push({0, s});
        while (!pq.empty()) {
            auto [du, u] = pq.top();
            pq.pop();
            if (done[static_cast<size_t>(u)]) continue;
            done[static_cast<size_t>(u)] = 1;
            for (NodeId k : t.neighbors(u)) {
                const Edge& e = t.edge(t.edge_index(u, k));
                std::int64_t nd = du + e.cost;
                std::int64_t& dk = dist[static_cast<size_t>(k)];
                NodeId& pk = prev[static_cast<size_t>(k)];
                // Tie-break: keep the larger-id predecessor.
                if (nd < dk || (nd == dk && u > pk)) {
                    bool improved = nd < dk;
                    dk = nd;
                    pk = u;
                    if (improved) pq.push({nd, k});
                }
            }
        }

        for (NodeId d = 0; d < n; ++d) {
            if (d == s || dist[static_cast<size_t>(d)] == kInfDist) continue;
            NodeId hop = d;
            while (prev[static_cast<size_t>(hop)] != s) hop = prev[static_cast<size_t>(hop)];
            tr.set(s, d, hop, dist[static_cast<size_t>(d)]);
        }
    }
    return tr;
}

Path primary_path(const RoutingTable& tr, NodeId s, NodeId d) {
    Path p;
    if (s == d) return p;
    if (!tr.reachable(s, d)) throw std::runtime_error("destination unreachable");
    p.nodes.push_back(s);
    NodeId at = s;
    while (at != d) {
        at = tr.next_hop(at, d);
        p.nodes.push_back(at);
    }
    p.cost = tr.dist(s, d);
    return p;
}

std::string dump_next_hop_matrix(const RoutingTable& tr, const Topology& t) {
    const int n = t.node_count();
    size_t w = 2;  // width of "--"
    for (int i = 0; i < n; ++i) w = std::max(w, t.label(i).size());

    std::ostringstream out;
    auto cell = [&](const std::string& s) {
        out << ' ' << std::string(w - s.size(), ' ') << s;
    };
    cell("");
    for (NodeId d = 0; d < n; ++d) cell(t.label(d));
    out << "\n";
    for (NodeId s = 0; s < n; ++s) {
        cell(t.label(s));
        for (NodeId d = 0; d < n; ++d) {
            NodeId hop = tr.next_hop(s, d);
            cell(hop == kNoNode ? "--" : t.label(hop));
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace artsim
