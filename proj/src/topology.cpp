#include "artsim/topology.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "artsim/rng.hpp"

namespace artsim {

Topology::Topology(std::vector<std::string> labels, std::vector<Edge> edges)
    : labels_(std::move(labels)), edges_(std::move(edges)) {
    const int n = node_count();
    for (auto& e : edges_) {
        if (e.u > e.v) std::swap(e.u, e.v);
        if (e.u < 0 || e.v >= n)
            throw std::invalid_argument("edge endpoint out of range");
        if (e.u == e.v) throw std::invalid_argument("self-loop");
        if (e.cost < 1) throw std::invalid_argument("edge cost must be >= 1");
        if (e.bandwidth <= 0) throw std::invalid_argument("bandwidth must be > 0");
        if (e.prop_delay < 0) throw std::invalid_argument("prop_delay must be >= 0");
        if (e.queue_limit < 1) throw std::invalid_argument("queue_limit must be >= 1");
    }
    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.u, a.v) < std::tie(b.u, b.v);
    });
    for (size_t i = 1; i < edges_.size(); ++i)
        if (edges_[i - 1].u == edges_[i].u && edges_[i - 1].v == edges_[i].v)
            throw std::invalid_argument("duplicate edge");

    adjacency_.assign(static_cast<size_t>(n), {});
    edge_lookup_.assign(static_cast<size_t>(n) * static_cast<size_t>(n), -1);
    for (size_t i = 0; i < edges_.size(); ++i) {
        const Edge& e = edges_[i];
        adjacency_[static_cast<size_t>(e.u)].push_back(e.v);
        adjacency_[static_cast<size_t>(e.v)].push_back(e.u);
        edge_lookup_[static_cast<size_t>(e.u) * n + e.v] = static_cast<int>(i);
        edge_lookup_[static_cast<size_t>(e.v) * n + e.u] = static_cast<int>(i);
    }
    for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
}

int Topology::edge_index(NodeId a, NodeId b) const {
    const int n = node_count();
    if (a < 0 || b < 0 || a >= n || b >= n) return -1;
    return edge_lookup_[static_cast<size_t>(a) * n + b];
}

const std::vector<NodeId>& Topology::neighbors(NodeId v) const {
    if (v < 0 || v >= node_count()) throw std::out_of_range("unknown node id");
    return adjacency_[static_cast<size_t>(v)];
}

NodeId Topology::find_label(const std::string& label) const {
    for (int i = 0; i < node_count(); ++i)
        if (labels_[static_cast<size_t>(i)] == label) return i;
    return kNoNode;
}

bool Topology::connected() const {
    const int n = node_count();
    if (n == 0) return false;
    std::vector<char> seen(static_cast<size_t>(n), 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        NodeId x = stack.back();
        stack.pop_back();
        for (NodeId k : neighbors(x))
            if (!seen[static_cast<size_t>(k)]) {
                seen[static_cast<size_t>(k)] = 1;
                ++count;
                stack.push_back(k);
            }
    }
    return count == n;
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream iss(line);
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

bool is_comment_or_blank(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (!isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

}  // namespace

Topology parse_topology(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;

    std::vector<std::string> labels;
    std::map<std::string, NodeId> by_label;
    bool have_nodes = false;

    std::vector<Edge> edges;
    // Duplicate detection must fire with the offending line number, before
    // the Topology constructor re-checks.
    std::map<std::pair<NodeId, NodeId>, int> seen_pairs;

    while (std::getline(in, line)) {
        ++lineno;
        if (is_comment_or_blank(line)) continue;
        auto tok = split_ws(line);

        if (!have_nodes) {
            if (tok[0] != "nodes")
                throw ParseError(lineno, "expected 'nodes' declaration, got '" + tok[0] + "'");
            if (tok.size() < 2) throw ParseError(lineno, "empty node section");
            if (tok.size() == 2) {
                // "nodes <n>" with all-decimal count, else a single label.
                bool numeric = !tok[1].empty() &&
                               tok[1].find_first_not_of("0123456789") == std::string::npos;
                if (numeric) {
                    long n = std::stol(tok[1]);
                    if (n < 1) throw ParseError(lineno, "node count must be >= 1");
                    for (long i = 0; i < n; ++i) labels.push_back(std::to_string(i));
                } else {
                    labels.push_back(tok[1]);
                }
            } else {
                for (size_t i = 1; i < tok.size(); ++i) labels.push_back(tok[i]);
            }
            for (size_t i = 0; i < labels.size(); ++i) {
                if (by_label.count(labels[i]))
                    throw ParseError(lineno, "duplicate node label '" + labels[i] + "'");
                by_label[labels[i]] = static_cast<NodeId>(i);
            }
            have_nodes = true;
            continue;
        }

        if (tok.size() < 3 || tok.size() > 6)
            throw ParseError(lineno, "expected '<u> <v> <cost> [bandwidth] [prop_delay] [queue_limit]'");
        Edge e;
        auto lookup = [&](const std::string& s) -> NodeId {
            auto it = by_label.find(s);
            if (it == by_label.end())
                throw ParseError(lineno, "endpoint '" + s + "' not declared");
            return it->second;
        };
        e.u = lookup(tok[0]);
        e.v = lookup(tok[1]);
        if (e.u == e.v) throw ParseError(lineno, "self-loop on '" + tok[0] + "'");
        try {
            e.cost = std::stoll(tok[2]);
            if (tok.size() > 3) e.bandwidth = std::stod(tok[3]);
            if (tok.size() > 4) e.prop_delay = std::stod(tok[4]);
            if (tok.size() > 5) e.queue_limit = std::stoi(tok[5]);
        } catch (const std::exception&) {
            throw ParseError(lineno, "malformed numeric field");
        }
        if (e.cost < 1) throw ParseError(lineno, "cost must be a positive integer");
        if (e.bandwidth <= 0) throw ParseError(lineno, "bandwidth must be > 0");
        if (e.prop_delay < 0) throw ParseError(lineno, "prop_delay must be >= 0");
        if (e.queue_limit < 1) throw ParseError(lineno, "queue_limit must be >= 1");

        auto key = std::minmax(e.u, e.v);
        auto [it, fresh] = seen_pairs.insert({{key.first, key.second}, lineno});
        if (!fresh)
            throw ParseError(lineno, "duplicate edge (first declared on line " +
                                         std::to_string(it->second) + ")");
        edges.push_back(e);
    }
    if (!have_nodes) throw ParseError(lineno, "empty node section");
    return Topology(std::move(labels), std::move(edges));
}

std::string serialize_topology(const Topology& t) {
    std::ostringstream out;
    bool default_labels = true;
    for (int i = 0; i < t.node_count(); ++i)
        if (t.label(i) != std::to_string(i)) {
            default_labels = false;
            break;
        }
    if (default_labels) {
        out << "nodes " << t.node_count() << "\n";
    } else {
        out << "nodes";
        for (const auto& l : t.labels()) out << ' ' << l;
        out << "\n";
    }
    out.precision(17);
    for (const Edge& e : t.edges())
        out << t.label(e.u) << ' ' << t.label(e.v) << ' ' << e.cost << ' ' << e.bandwidth
            << ' ' << e.prop_delay << ' ' << e.queue_limit << "\n";
    return out.str();
}

Topology random_topology(int n, double extra_edge_prob, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("random_topology requires n >= 2");
    if (extra_edge_prob < 0.0 || extra_edge_prob > 1.0)
        throw std::invalid_argument("extra_edge_prob must be in [0, 1]");
    Rng rng(derive_seed(seed, "random_topology"));

    // Random spanning tree: attach each node to a uniformly random earlier
    // node under a random labeling.
    std::vector<NodeId> order(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
    for (int i = n - 1; i > 0; --i)
        std::swap(order[static_cast<size_t>(i)],
                  order[rng.below(static_cast<std::uint64_t>(i) + 1)]);

    std::vector<Edge> edges;
    std::vector<char> in_tree(static_cast<size_t>(n) * static_cast<size_t>(n), 0);
    auto mark = [&](NodeId a, NodeId b) {
        in_tree[static_cast<size_t>(a) * n + b] = 1;
        in_tree[static_cast<size_t>(b) * n + a] = 1;
    };
    for (int i = 1; i < n; ++i) {
        NodeId a = order[static_cast<size_t>(i)];
        NodeId b = order[rng.below(static_cast<std::uint64_t>(i))];
        Edge e;
        e.u = std::min(a, b);
        e.v = std::max(a, b);
        edges.push_back(e);
        mark(a, b);
    }
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v) {
            if (in_tree[static_cast<size_t>(u) * n + v]) continue;
            if (rng.unit() < extra_edge_prob) {
                Edge e;
                e.u = u;
                e.v = v;
                edges.push_back(e);
            }
        }

    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    return Topology(std::move(labels), std::move(edges));
}

}  // namespace artsim
