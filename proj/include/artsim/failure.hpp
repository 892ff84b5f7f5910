#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "artsim/routing.hpp"
#include "artsim/topology.hpp"

namespace artsim {

struct FailureEvent {
    int edge = -1;                       // index into Topology::edges()
    double fail_time = 0.0;              // seconds
    std::optional<double> repair_time;   // > fail_time when present
};

/// Restoration-time components: a failure-confirmation gate, link-state
/// packet generation and per-hop flooding latency, an SPF hold-down, the
/// SPF computation itself, and the forwarding-table write rate.
struct ConvergenceTimers {
    double notification_timer = 2.0;        // s   (minimum sensible: 0.010)
    double lsp_generation = 0.050;          // s   (minimum 0.001)
    double spf_timer = 5.5;                 // s hold-down between SPF runs
    double lsp_processing_per_hop = 0.010;  // s/hop
    double spf_compute_min = 0.100;         // s
    double spf_compute_max = 0.400;         // s
    double fib_update_per_ms = 20.0;        // entries per millisecond

    void validate() const;
};

/// Per-node instants and components of one reconvergence episode.
struct ConvergenceTimeline {
    double fail_time = 0.0;
    double detection_time = 0.0;  // fail_time + detection_delay

    struct NodeTimes {
        bool converges = false;    // false when the node never hears of it
        int hops_from_failure = 0;
        double notification = 0;   // max(detection_delay, notification_timer)
        double lsp_generation = 0;
        double lsp_processing = 0;  // hops * per-hop rate
        double spf_wait = 0;        // hold-down contribution
        double spf_compute = 0;
        double fib_update = 0;
        double lsa_arrival = 0;     // fail + detection + generation + flooding
        double spf_start = 0;
        double fib_ready = 0;
        double component_sum() const {
            return notification + lsp_generation + lsp_processing + spf_wait + spf_compute +
                   fib_update;
        }
    };
    std::vector<NodeTimes> node;

    double max_fib_ready() const;
};

/// Draw `count` failures on distinct edges of the primary path, uniformly,
/// with fail times uniform in [window_start, window_end]. Sorted by time.
/// Throws std::invalid_argument when count exceeds the primary edge count.
std::vector<FailureEvent> generate_failures(const Topology& t, const Path& primary, int count,
                                            double window_start, double window_end,
                                            std::uint64_t seed);

/// Reconvergence instants for one failure. Per node v:
///   fib_ready = fail + max(detection_delay, notification_timer)
///             + lsp_generation + hops(v) * lsp_processing_per_hop
///             + spf_wait + spf_compute(v) + n / fib_update_rate
/// where hops(v) is the surviving-topology hop count from the nearest failed
/// endpoint (0 for the endpoints themselves), spf_compute is drawn per node
/// from [spf_compute_min, spf_compute_max] seeded by `seed`, and spf_wait
/// enforces the hold-down against `last_spf_start` (zero for a lone failure).
ConvergenceTimeline convergence_timeline(const Topology& t, const ConvergenceTimers& timers,
                                         const FailureEvent& ev, double detection_delay,
                                         std::uint64_t seed = 0,
                                         const std::vector<double>* last_spf_start = nullptr,
                                         const std::vector<char>* already_down = nullptr);

/// Routing tables of the topology with the given edges removed.
RoutingTable reconverged_tables(const Topology& t, const std::vector<int>& down_edges);

/// Topology with the given edge indices removed (node set unchanged).
Topology remove_edges(const Topology& t, const std::vector<int>& down_edges);

/// Schedule file: lines "<u> <v> <fail_time_s> [repair_time_s]".
std::vector<FailureEvent> parse_failure_schedule(const std::string& text, const Topology& t);
std::string serialize_failure_schedule(const std::vector<FailureEvent>& sched, const Topology& t);

}  // namespace artsim
