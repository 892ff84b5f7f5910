#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "artsim/art_backup.hpp"
#include "artsim/failure.hpp"
#include "artsim/routing.hpp"
#include "artsim/topology.hpp"

namespace artsim {

/// What a node does with traffic whose stale table points into a link it
/// knows is down: hand it back to the previous hop (the micro-loop story)
/// or discard it on the spot.
enum class LsFailureBehavior { BounceToPrevious, DropAtFailure };

struct Flow {
    NodeId src = kNoNode;
    NodeId dst = kNoNode;
};

struct SimConfig {
    double duration = 50.0;      // seconds
    double cbr_rate = 200000.0;  // bits/second per flow
    double cbr_start = 1.0;      // seconds
    int packet_size = 500;       // bytes
    std::vector<Flow> flows;     // at least one
    ForwardingMode mode = ForwardingMode::LS;
    int ttl_init = 64;
    std::uint64_t seed = 0;
    ConvergenceTimers timers;
    double detection_delay = 0.010;  // seconds, layer-2 loss-of-signal
    LsFailureBehavior ls_failure_behavior = LsFailureBehavior::BounceToPrevious;
    bool check_invariants = true;

    void validate() const;
};

enum class DropReason { LinkDown, TtlExpired, QueueFull, Unreachable };

/// Raw measurements of one trial. Conservation holds exactly:
/// sent == delivered + all drops + in_flight_at_end.
struct MetricsRecord {
    std::uint64_t sent = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped_link_down = 0;
    std::uint64_t dropped_ttl = 0;
    std::uint64_t dropped_queue = 0;
    std::uint64_t dropped_unreachable = 0;
    std::uint64_t in_flight_at_end = 0;

    double total_delay = 0.0;          // over delivered packets
    std::uint64_t total_hops = 0;      // over delivered packets
    double delivered_bits = 0.0;
    std::vector<double> throughput_bins;  // delivered bits per 1 s bin

    std::vector<std::uint64_t> node_forwarding;  // transmissions per node

    // Packets created inside [first failure, last fib-ready] per trial.
    double window_start = 0.0;
    double window_end = 0.0;
    std::uint64_t window_created = 0;
    std::uint64_t window_delivered = 0;
    std::uint64_t window_dropped = 0;
    double window_delay_sum = 0.0;

    double avg_primary_len = 0.0;
    double avg_backup_len = 0.0;       // full-path: |Pa|; local: prefix + alternative
    double avg_new_primary_len = 0.0;  // after the final reconvergence

    std::uint64_t drops_total() const {
        return dropped_link_down + dropped_ttl + dropped_queue + dropped_unreachable;
    }
    double mean_delay() const { return delivered ? total_delay / delivered : 0.0; }
    double mean_window_delay() const {
        return window_delivered ? window_delay_sum / window_delivered : 0.0;
    }

    /// Exact textual form (round-trip floats) for determinism checks.
    std::string fingerprint() const;
};

/// Deterministic event-driven execution of one trial. `bt` must be present
/// exactly when cfg.mode != LS. The schedule may be empty. Identical inputs
/// give a bit-identical record.
MetricsRecord run(const Topology& t, const RoutingTable& tr, const BackupTable* bt,
                  const std::vector<FailureEvent>& sched, const SimConfig& cfg,
                  std::ostream* event_log = nullptr);

/// Store-and-forward service time of one packet on a link.
inline double serialization_delay(const Edge& e, int packet_size_bytes) {
    return packet_size_bytes * 8.0 / e.bandwidth;
}

}  // namespace artsim
