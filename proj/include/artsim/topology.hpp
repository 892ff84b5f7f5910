#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace artsim {

using NodeId = int;
inline constexpr NodeId kNoNode = -1;

/// Thrown by topology/schedule/config parsers; carries a 1-based line number
/// when the error is tied to a specific input line (0 otherwise).
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& msg)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Undirected link with routing metric and simulator attributes.
/// Canonical orientation u < v.
struct Edge {
    NodeId u = kNoNode;
    NodeId v = kNoNode;
    std::int64_t cost = 1;       // routing metric, >= 1
    double bandwidth = 1e6;      // bits/second
    double prop_delay = 0.010;   // seconds
    int queue_limit = 50;        // packets per direction

    NodeId other(NodeId n) const { return n == u ? v : u; }
    bool operator==(const Edge&) const = default;
};

/// Immutable after construction; shared read-only across concurrent trials.
class Topology {
public:
    Topology() = default;
    Topology(std::vector<std::string> labels, std::vector<Edge> edges);

    int node_count() const { return static_cast<int>(labels_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int index) const { return edges_.at(static_cast<size_t>(index)); }

    /// Index of edge {a,b}, or -1 if absent.
    int edge_index(NodeId a, NodeId b) const;
    bool has_edge(NodeId a, NodeId b) const { return edge_index(a, b) >= 0; }

    /// Ascending-sorted neighbor ids. Throws std::out_of_range on bad id.
    const std::vector<NodeId>& neighbors(NodeId v) const;

    const std::string& label(NodeId v) const { return labels_.at(static_cast<size_t>(v)); }
    const std::vector<std::string>& labels() const { return labels_; }
    /// Node id for a label, or kNoNode.
    NodeId find_label(const std::string& label) const;

    bool connected() const;

    bool operator==(const Topology&) const = default;

private:
    std::vector<std::string> labels_;
    std::vector<Edge> edges_;                    // sorted by (u, v), u < v
    std::vector<std::vector<NodeId>> adjacency_; // ascending per node
    std::vector<int> edge_lookup_;               // n*n -> edge index or -1
};

/// Parse the line-oriented topology format:
///   # comment
///   nodes <n>            (ids 0..n-1, labels are the decimal ids)
///   nodes <lbl> <lbl>... (labels mapped to dense ids in order given)
///   <u> <v> <cost> [bandwidth_bps] [prop_delay_s] [queue_limit]
/// Endpoints are labels (or decimal ids for the "nodes <n>" form).
Topology parse_topology(const std::string& text);

/// Canonical form: node line, then edges sorted ascending with u < v.
/// parse_topology(serialize_topology(t)) == t.
std::string serialize_topology(const Topology& t);

/// Connected random graph: uniform random spanning tree plus each remaining
/// pair independently with probability extra_edge_prob. Identical seed gives
/// an identical graph. All edge attributes take the defaults.
Topology random_topology(int n, double extra_edge_prob, std::uint64_t seed);

}  // namespace artsim
