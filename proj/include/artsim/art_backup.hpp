#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "artsim/routing.hpp"
#include "artsim/topology.hpp"

namespace artsim {

enum class ForwardingMode { LS, ARTFP, ARTCP };

std::string to_string(ForwardingMode m);
std::optional<ForwardingMode> parse_mode(const std::string& s);

/// How alternative paths must differ from the primary path: by edges only,
/// or additionally by interior nodes (the stricter reading; default).
enum class Disjointness { EdgeOnly, InteriorNode };

/// Per-node counters for the backup-discovery message exchange. Lossless:
/// every sent message is received, so class totals match pairwise.
struct MessageLedger {
    struct Counters {
        std::uint64_t enquiry_sent = 0;
        std::uint64_t enquiry_received = 0;
        std::uint64_t reply_sent = 0;
        std::uint64_t reply_received = 0;
        std::uint64_t total() const {
            return enquiry_sent + enquiry_received + reply_sent + reply_received;
        }
    };
    std::vector<Counters> node;

    explicit MessageLedger(int n = 0) : node(static_cast<size_t>(n)) {}
    void merge(const MessageLedger& other);
    std::uint64_t total_enquiries() const;
    std::uint64_t total_replies() const;
    /// Every message counted once at the sender and once at the receiver.
    std::uint64_t total_node_events() const;
};

/// Alternative paths keyed by ordered (source, destination). Absent entry
/// means the pair could not be protected.
class AltPathSet {
public:
    AltPathSet() = default;
    explicit AltPathSet(int n) : n_(n), alt_(static_cast<size_t>(n) * n) {}

    int node_count() const { return n_; }
    const std::optional<Path>& get(NodeId s, NodeId d) const { return alt_[idx(s, d)]; }
    void set(NodeId s, NodeId d, Path p) { alt_[idx(s, d)] = std::move(p); }

    bool operator==(const AltPathSet&) const = default;

private:
    size_t idx(NodeId s, NodeId d) const {
        return static_cast<size_t>(s) * static_cast<size_t>(n_) + static_cast<size_t>(d);
    }
    int n_ = 0;
    std::vector<std::optional<Path>> alt_;
};

/// Edges excluded from a local-reroute search.
using AvoidSet = std::vector<int>;  // edge indices into Topology::edges()

/// One row of the backup routing table. For the full-path flavor the
/// reroute node is the flow source; for the local flavor it is the node
/// adjacent to the presumed failure.
struct BackupEntry {
    NodeId reroute_node = kNoNode;
    NodeId dest = kNoNode;
    bool protected_ = false;
    Path alt;                                  // empty unless protected
    std::optional<NodeId> first_backup_hop;    // alt.nodes[1]
    std::optional<NodeId> second_backup_hop;   // alt.nodes[2] when present
    int position = 0;          // index of reroute_node on the primary path
    int failed_edge = -1;      // local flavor: the presumed failed edge
};

struct BackupTable {
    ForwardingMode mode = ForwardingMode::ARTFP;
    Disjointness disjointness = Disjointness::InteriorNode;
    int n = 0;

    /// ARTFP: one entry per ordered pair (index s*n+d).
    std::vector<BackupEntry> pair_entries;
    /// ARTCP: per ordered pair, one entry per primary-path position.
    std::vector<std::vector<BackupEntry>> local_entries;

    const BackupEntry* artfp_entry(NodeId s, NodeId d) const;
    /// Entry engaged at node m when `failed_edge` on the (s,d) primary fails.
    const BackupEntry* artcp_entry(NodeId s, NodeId d, NodeId m, int failed_edge) const;
    const std::vector<BackupEntry>& artcp_positions(NodeId s, NodeId d) const;
};

/// Full-path search for one pair: breadth-first growth of a prefix that
/// avoids the (s,d) primary path, completed through the routing table as
/// soon as some frontier neighbor's own primary route also avoids it.
/// Returns the first path found under FIFO order, or absent.
std::optional<Path> artfp_pair(const RoutingTable& tr, const Topology& t, NodeId s, NodeId d,
                               Disjointness disjointness, MessageLedger* ledger = nullptr);

/// artfp_pair over every ordered pair with a reachable destination.
AltPathSet artfp_all(const RoutingTable& tr, const Topology& t,
                     Disjointness disjointness = Disjointness::InteriorNode,
                     MessageLedger* ledger = nullptr);

/// Local-reroute search: identical shape, but admissibility is tested
/// against an explicit edge avoid-set instead of the primary path.
std::optional<Path> artcp(const RoutingTable& tr, const Topology& t, NodeId s, NodeId d,
                          const AvoidSet& avoid, MessageLedger* ledger = nullptr);

/// Assemble the backup routing table for the requested mode, counting
/// discovery messages. ARTCP entries are built per primary-path position
/// with avoid = upstream primary edges plus the presumed failed edge.
std::pair<BackupTable, MessageLedger> build_backup_tables(
    const RoutingTable& tr, const Topology& t, ForwardingMode mode,
    Disjointness disjointness = Disjointness::InteriorNode);

/// Per-pair lines "<s> <d> <mode> <protected> <path: v0-v1-...-vk>".
/// For the local flavor the listed row is the pair's position-0 entry
/// (the source's own local protection for its first primary edge).
std::string dump_backup_table(const BackupTable& bt, const Topology& t);

}  // namespace artsim
