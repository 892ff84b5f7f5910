#include "artsim/art_backup.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace artsim {

std::string to_string(ForwardingMode m) {
    switch (m) {
        case ForwardingMode::LS: return "ls";
        case ForwardingMode::ARTFP: return "artfp";
        case ForwardingMode::ARTCP: return "artcp";
    }
    return "?";
}

std::optional<ForwardingMode> parse_mode(const std::string& s) {
    if (s == "ls" || s == "LS") return ForwardingMode::LS;
    if (s == "artfp" || s == "ARTFP") return ForwardingMode::ARTFP;
    if (s == "artcp" || s == "ARTCP") return ForwardingMode::ARTCP;
    return std::nullopt;
}

void MessageLedger::merge(const MessageLedger& other) {
    if (node.size() < other.node.size()) node.resize(other.node.size());
    for (size_t i = 0; i < other.node.size(); ++i) {
        node[i].enquiry_sent += other.node[i].enquiry_sent;
        node[i].enquiry_received += other.node[i].enquiry_received;
        node[i].reply_sent += other.node[i].reply_sent;
        node[i].reply_received += other.node[i].reply_received;
    }
}

std::uint64_t MessageLedger::total_enquiries() const {
    std::uint64_t n = 0;
    for (const auto& c : node) n += c.enquiry_sent;
    return n;
}

std::uint64_t MessageLedger::total_replies() const {
    std::uint64_t n = 0;
    for (const auto& c : node) n += c.reply_sent;
    return n;
}

std::uint64_t MessageLedger::total_node_events() const {
    std::uint64_t n = 0;
    for (const auto& c : node) n += c.total();
    return n;
}

const BackupEntry* BackupTable::artfp_entry(NodeId s, NodeId d) const {
    if (mode != ForwardingMode::ARTFP) return nullptr;
    const BackupEntry& e = pair_entries[static_cast<size_t>(s) * n + d];
    return e.protected_ ? &e : nullptr;
}

const BackupEntry* BackupTable::artcp_entry(NodeId s, NodeId d, NodeId m, int failed_edge) const {
    if (mode != ForwardingMode::ARTCP) return nullptr;
    for (const BackupEntry& e : local_entries[static_cast<size_t>(s) * n + d])
        if (e.reroute_node == m && e.failed_edge == failed_edge)
            return e.protected_ ? &e : nullptr;
    return nullptr;
}

const std::vector<BackupEntry>& BackupTable::artcp_positions(NodeId s, NodeId d) const {
    return local_entries[static_cast<size_t>(s) * n + d];
}

namespace {

// Breadth-first search over (prefix, frontier) couples, shared by the
// full-path and local-reroute flavors. An extension (x, k) is admissible
// when the edge is not avoided, k is not an avoided node, and k is not
// already on the prefix. The search completes at frontier neighbor k as soon
// as k's own routing-table path to d also clears the avoid sets and joins
// the grown prefix without repeating a node.
//
// Discovery cost model: an expanded frontier node sends one enquiry to each
// eligible neighbor (off the excluded node set, across a usable edge) and
// receives one reply per enquiry; expanded nodes other than the origin relay
// one reply back to the origin. Each (node, neighbor) enquiry and each relay
// is counted once per search: a node never re-asks the same neighbor about
// the same destination. When no qualifying path exists the probing sweeps
// everything reachable under the avoid sets before concluding.
struct GuidedSearch {
    const RoutingTable& tr;
    const Topology& t;
    NodeId src;
    NodeId dest;
    std::vector<char> avoid_edge;    // by edge index
    std::vector<char> avoid_node;    // by node id (never contains src/dest)
    std::vector<char> probe_skip;    // nodes never enquired (on-primary set)
    MessageLedger* ledger = nullptr;

    std::vector<char> probed;        // (x, k) pairs already charged
    std::vector<char> relayed;       // frontier nodes that relayed a reply

    GuidedSearch(const RoutingTable& tr_, const Topology& t_, NodeId s, NodeId d)
        : tr(tr_), t(t_), src(s), dest(d) {
        avoid_edge.assign(static_cast<size_t>(t.edge_count()), 0);
        avoid_node.assign(static_cast<size_t>(t.node_count()), 0);
        probe_skip.assign(static_cast<size_t>(t.node_count()), 0);
    }

    bool edge_usable(NodeId a, NodeId b) const {
        return !avoid_edge[static_cast<size_t>(t.edge_index(a, b))];
    }
    bool node_usable(NodeId k) const {
        return k == dest || !avoid_node[static_cast<size_t>(k)];
    }

    // Nodes reachable from src through admissible edges/nodes; dest is a
    // valid endpoint but is not expanded.
    std::vector<char> filtered_reach() const {
        std::vector<char> seen(static_cast<size_t>(t.node_count()), 0);
        std::vector<NodeId> stack{src};
        seen[static_cast<size_t>(src)] = 1;
        while (!stack.empty()) {
            NodeId x = stack.back();
            stack.pop_back();
            if (x == dest) continue;
            for (NodeId k : t.neighbors(x)) {
                if (seen[static_cast<size_t>(k)]) continue;
                if (!edge_usable(x, k) || !node_usable(k)) continue;
                seen[static_cast<size_t>(k)] = 1;
                stack.push_back(k);
            }
        }
        return seen;
    }

    void expand_messages(NodeId x) {
        if (!ledger) return;
        if (probed.empty()) {
            probed.assign(static_cast<size_t>(t.node_count()) * t.node_count(), 0);
            relayed.assign(static_cast<size_t>(t.node_count()), 0);
        }
        const int n = t.node_count();
        for (NodeId k : t.neighbors(x)) {
            if (k == dest || probe_skip[static_cast<size_t>(k)]) continue;
            if (!edge_usable(x, k) || !node_usable(k)) continue;
            char& mark = probed[static_cast<size_t>(x) * n + k];
            if (mark) continue;
            mark = 1;
            ledger->node[static_cast<size_t>(x)].enquiry_sent++;
            ledger->node[static_cast<size_t>(k)].enquiry_received++;
            ledger->node[static_cast<size_t>(k)].reply_sent++;
            ledger->node[static_cast<size_t>(x)].reply_received++;
        }
        if (x != src && !relayed[static_cast<size_t>(x)]) {
            relayed[static_cast<size_t>(x)] = 1;
            ledger->node[static_cast<size_t>(x)].reply_sent++;
            ledger->node[static_cast<size_t>(src)].reply_received++;
        }
    }

    // Routing-table suffix from k, or absent when it hits an avoid set or
    // revisits the grown prefix.
    std::optional<std::vector<NodeId>> suffix_if_clear(NodeId k,
                                                       const std::vector<char>& on_grown) const {
        std::vector<NodeId> suffix{k};
        NodeId at = k;
        while (at != dest) {
            NodeId nx = tr.next_hop(at, dest);
            if (!edge_usable(at, nx) || !node_usable(nx)) return std::nullopt;
            if (on_grown[static_cast<size_t>(nx)]) return std::nullopt;
            suffix.push_back(nx);
            at = nx;
        }
        return suffix;
    }

    std::optional<Path> run() {
        if (src == dest || !tr.reachable(src, dest)) return std::nullopt;

        std::vector<char> reach = filtered_reach();
        if (!reach[static_cast<size_t>(dest)]) {
            // No qualifying path exists. The enquiry flood still happens and
            // comes back all-negative; charge it without growing prefixes.
            if (ledger)
                for (NodeId x = 0; x < t.node_count(); ++x)
                    if (reach[static_cast<size_t>(x)] && x != dest) expand_messages(x);
            return std::nullopt;
        }

        std::deque<std::vector<NodeId>> queue;
        queue.push_back({src});
        std::optional<Path> found;
        std::vector<char> on_prefix(static_cast<size_t>(t.node_count()), 0);

        while (!queue.empty() && !found) {
            const std::vector<NodeId> prefix = queue.front();
            NodeId x = prefix.back();
            std::fill(on_prefix.begin(), on_prefix.end(), 0);
            for (NodeId v : prefix) on_prefix[static_cast<size_t>(v)] = 1;

            expand_messages(x);

            for (NodeId k : t.neighbors(x)) {
                if (on_prefix[static_cast<size_t>(k)]) continue;
                if (!edge_usable(x, k) || !node_usable(k)) continue;

                if (k == dest) {
                    found = assemble(prefix, {dest});
                    break;
                }
                on_prefix[static_cast<size_t>(k)] = 1;
                auto suffix = suffix_if_clear(k, on_prefix);
                on_prefix[static_cast<size_t>(k)] = 0;
                if (suffix) {
                    found = assemble(prefix, *suffix);
                    break;
                }
                std::vector<NodeId> grown = prefix;
                grown.push_back(k);
                queue.push_back(std::move(grown));
            }
            queue.pop_front();
        }
        return found;
    }

    Path assemble(const std::vector<NodeId>& prefix, const std::vector<NodeId>& suffix) const {
        Path p;
        p.nodes = prefix;
        p.nodes.insert(p.nodes.end(), suffix.begin(), suffix.end());
        for (size_t i = 0; i + 1 < p.nodes.size(); ++i)
            p.cost += t.edge(t.edge_index(p.nodes[i], p.nodes[i + 1])).cost;
        return p;
    }
};

}  // namespace

std::optional<Path> artfp_pair(const RoutingTable& tr, const Topology& t, NodeId s, NodeId d,
                               Disjointness disjointness, MessageLedger* ledger) {
    if (s == d || !tr.reachable(s, d)) return std::nullopt;
    GuidedSearch search(tr, t, s, d);
    search.ledger = ledger;

    Path primary = primary_path(tr, s, d);
    for (size_t i = 0; i + 1 < primary.nodes.size(); ++i) {
        int e = t.edge_index(primary.nodes[i], primary.nodes[i + 1]);
        search.avoid_edge[static_cast<size_t>(e)] = 1;
    }
    if (disjointness == Disjointness::InteriorNode)
        for (size_t i = 1; i + 1 < primary.nodes.size(); ++i)
            search.avoid_node[static_cast<size_t>(primary.nodes[i])] = 1;
    for (NodeId v : primary.nodes) search.probe_skip[static_cast<size_t>(v)] = 1;

    return search.run();
}

AltPathSet artfp_all(const RoutingTable& tr, const Topology& t, Disjointness disjointness,
                     MessageLedger* ledger) {
    const int n = t.node_count();
    AltPathSet out(n);
    for (NodeId s = 0; s < n; ++s)
        for (NodeId d = 0; d < n; ++d) {
            if (s == d || !tr.reachable(s, d)) continue;
            if (auto pa = artfp_pair(tr, t, s, d, disjointness, ledger))
                out.set(s, d, std::move(*pa));
        }
    return out;
}

std::optional<Path> artcp(const RoutingTable& tr, const Topology& t, NodeId s, NodeId d,
                          const AvoidSet& avoid, MessageLedger* ledger) {
    if (s == d || !tr.reachable(s, d)) return std::nullopt;
    GuidedSearch search(tr, t, s, d);
    search.ledger = ledger;
    for (int e : avoid) search.avoid_edge.at(static_cast<size_t>(e)) = 1;
    return search.run();
}

namespace {

BackupEntry make_entry(NodeId reroute, NodeId dest, std::optional<Path> alt, int position,
                       int failed_edge) {
    BackupEntry e;
    e.reroute_node = reroute;
    e.dest = dest;
    e.position = position;
    e.failed_edge = failed_edge;
    if (alt) {
        e.protected_ = true;
        e.alt = std::move(*alt);
        e.first_backup_hop = e.alt.nodes[1];
        if (e.alt.nodes.size() >= 3) e.second_backup_hop = e.alt.nodes[2];
    }
    return e;
}

}  // namespace

std::pair<BackupTable, MessageLedger> build_backup_tables(const RoutingTable& tr,
                                                          const Topology& t, ForwardingMode mode,
                                                          Disjointness disjointness) {
    const int n = t.node_count();
    BackupTable bt;
    bt.mode = mode;
    bt.disjointness = disjointness;
    bt.n = n;
    MessageLedger ledger(n);

    if (mode == ForwardingMode::ARTFP) {
        bt.pair_entries.resize(static_cast<size_t>(n) * n);
        for (NodeId s = 0; s < n; ++s)
            for (NodeId d = 0; d < n; ++d) {
                if (s == d || !tr.reachable(s, d)) continue;
                auto pa = artfp_pair(tr, t, s, d, disjointness, &ledger);
                bt.pair_entries[static_cast<size_t>(s) * n + d] =
                    make_entry(s, d, std::move(pa), 0, -1);
            }
    } else if (mode == ForwardingMode::ARTCP) {
        bt.local_entries.resize(static_cast<size_t>(n) * n);
        for (NodeId s = 0; s < n; ++s)
            for (NodeId d = 0; d < n; ++d) {
                if (s == d || !tr.reachable(s, d)) continue;
                Path primary = primary_path(tr, s, d);
                AvoidSet upstream;
                for (size_t i = 0; i + 1 < primary.nodes.size(); ++i) {
                    NodeId m = primary.nodes[i];
                    int failed = t.edge_index(m, primary.nodes[i + 1]);
                    AvoidSet avoid = upstream;
                    avoid.push_back(failed);
                    auto pa = artcp(tr, t, m, d, avoid, &ledger);
                    bt.local_entries[static_cast<size_t>(s) * n + d].push_back(
                        make_entry(m, d, std::move(pa), static_cast<int>(i), failed));
                    upstream.push_back(failed);
                }
            }
    }
    return {std::move(bt), std::move(ledger)};
}

std::string dump_backup_table(const BackupTable& bt, const Topology& t) {
    std::ostringstream out;
    auto path_str = [&](const BackupEntry& e) {
        if (!e.protected_) return std::string("-");
        std::string s;
        for (size_t i = 0; i < e.alt.nodes.size(); ++i) {
            if (i) s += '-';
            s += t.label(e.alt.nodes[i]);
        }
        return s;
    };
    const int n = bt.n;
    for (NodeId s = 0; s < n; ++s)
        for (NodeId d = 0; d < n; ++d) {
            if (s == d) continue;
            if (bt.mode == ForwardingMode::ARTFP) {
                const BackupEntry& e = bt.pair_entries[static_cast<size_t>(s) * n + d];
                if (e.dest == kNoNode) continue;  // unreachable pair, never built
                out << t.label(s) << ' ' << t.label(d) << " artfp "
                    << (e.protected_ ? "yes" : "no") << ' ' << path_str(e) << "\n";
            } else if (bt.mode == ForwardingMode::ARTCP) {
                const auto& rows = bt.local_entries[static_cast<size_t>(s) * n + d];
                if (rows.empty()) continue;
                const BackupEntry& e = rows.front();
                out << t.label(s) << ' ' << t.label(d) << " artcp "
                    << (e.protected_ ? "yes" : "no") << ' ' << path_str(e) << "\n";
            }
        }
    return out.str();
}

}  // namespace artsim
