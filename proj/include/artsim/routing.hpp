#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "artsim/topology.hpp"

namespace artsim {

inline constexpr std::int64_t kInfDist = std::numeric_limits<std::int64_t>::max();

/// Simple node sequence v0..vk with its total edge cost. An empty node list
/// is the empty path (used for s == d).
struct Path {
    std::vector<NodeId> nodes;
    std::int64_t cost = 0;

    bool empty() const { return nodes.empty(); }
    int hops() const { return nodes.empty() ? 0 : static_cast<int>(nodes.size()) - 1; }
    NodeId source() const { return nodes.front(); }
    NodeId dest() const { return nodes.back(); }

    bool operator==(const Path&) const = default;
};

/// All-pairs next-hop and distance matrices, row = source, column =
/// destination. next_hop is kNoNode on the diagonal and for unreachable
/// pairs; dist is kInfDist when unreachable.
class RoutingTable {
public:
    RoutingTable() = default;
    RoutingTable(int n) : n_(n) {
        next_hop_.assign(static_cast<size_t>(n) * n, kNoNode);
        dist_.assign(static_cast<size_t>(n) * n, kInfDist);
        for (int v = 0; v < n; ++v) dist_[idx(v, v)] = 0;
    }

    int node_count() const { return n_; }
    NodeId next_hop(NodeId s, NodeId d) const { return next_hop_[idx(s, d)]; }
    std::int64_t dist(NodeId s, NodeId d) const { return dist_[idx(s, d)]; }
    bool reachable(NodeId s, NodeId d) const { return s == d || dist_[idx(s, d)] != kInfDist; }

    void set(NodeId s, NodeId d, NodeId hop, std::int64_t dist) {
        next_hop_[idx(s, d)] = hop;
        dist_[idx(s, d)] = dist;
    }

    bool operator==(const RoutingTable&) const = default;

private:
    size_t idx(NodeId s, NodeId d) const {
        return static_cast<size_t>(s) * static_cast<size_t>(n_) + static_cast<size_t>(d);
    }
    int n_ = 0;
    std::vector<NodeId> next_hop_;
    std::vector<std::int64_t> dist_;
};

/// Per-source Dijkstra over the whole topology. Deterministic: among
/// equal-cost shortest paths the larger-id predecessor wins at every node,
/// which reproduces the published 4-node reference matrix.
RoutingTable build_routing_tables(const Topology& t);

/// Walk next hops from s to d. s == d gives the empty path. Throws
/// std::runtime_error if d is unreachable from s.
Path primary_path(const RoutingTable& tr, NodeId s, NodeId d);

/// Next-hop matrix rendered with labeled rows/columns and '--' on the
/// diagonal (and for unreachable pairs), for golden-file tests.
std::string dump_next_hop_matrix(const RoutingTable& tr, const Topology& t);

}  // namespace artsim
