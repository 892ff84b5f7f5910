#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "artsim/simulator.hpp"

namespace artsim {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Batch-run configuration, parsed from "key = value" lines. Unknown keys
/// are errors. Every field has a default; see docs/README for the key list.
struct ExperimentConfig {
    // Topology source: a file, or per-trial seeded random graphs.
    std::optional<std::string> topology_file;
    int random_nodes = 20;
    double random_edge_prob = 0.25;

    int trials = 50;
    std::uint64_t base_seed = 1;
    std::vector<ForwardingMode> modes = {ForwardingMode::LS, ForwardingMode::ARTFP,
                                         ForwardingMode::ARTCP};

    // Traffic.
    double duration = 50.0;
    double cbr_rate = 200000.0;
    double cbr_start = 1.0;
    int packet_size = 500;
    int ttl = 64;
    std::optional<std::string> flow_src;  // labels; both or neither
    std::optional<std::string> flow_dst;
    int flow_min_hops = 2;  // random flows must have this many primary hops

    // Failures.
    int failure_count = 1;
    double failure_window_start = 5.0;
    double failure_window_end = 45.0;
    std::optional<std::string> failure_schedule_file;

    // Reconvergence model.
    ConvergenceTimers timers;
    double detection_delay = 0.010;
    LsFailureBehavior ls_failure_behavior = LsFailureBehavior::BounceToPrevious;
    Disjointness disjointness = Disjointness::InteriorNode;

    std::string out_dir = "out";
    int workers = 0;  // 0 = hardware concurrency

    static ExperimentConfig parse(const std::string& text);
    void validate() const;
};

/// One mode's outcome inside a trial.
struct TrialModeResult {
    ForwardingMode mode = ForwardingMode::LS;
    MetricsRecord rec;
    std::uint64_t control_msgs_total = 0;        // enquiries + replies, counted once
    std::uint64_t control_node_events = 0;       // per-node send+receive events
    std::vector<std::uint64_t> node_control;     // per node
    std::uint64_t max_node_load = 0;             // max(forwarding + control)
    std::uint64_t total_load = 0;                // sum over nodes
};

struct TrialResult {
    int trial = 0;
    Topology topo;
    Flow flow;
    int primary_hops = 0;
    std::vector<FailureEvent> sched;
    std::vector<TrialModeResult> per_mode;
};

struct Stat {
    double mean = 0, stddev = 0, min = 0, max = 0;
    std::uint64_t count = 0;
};

struct SummaryTable {
    int trials = 0;
    std::vector<ForwardingMode> modes;
    // metric name -> per-mode stats; metrics: drops, delivered, mean_delay_s,
    // window_delay_s, throughput_bps, primary_len, backup_len,
    // new_primary_len, control_msgs, max_node_load, total_load
    std::map<std::string, std::map<std::string, Stat>> by_metric;
    // Fig.-3 style buckets: primary hop count -> per-mode mean drops.
    std::map<int, std::map<std::string, Stat>> loss_by_hops;
    // Mean delivered bits per 1 s bin, per mode.
    std::map<std::string, std::vector<double>> throughput_series;
    // Mean per-node load (forwarding + control), per mode, by node id.
    std::map<std::string, std::vector<double>> node_load;

    std::string to_text() const;
};

/// Run all trials (worker pool; output independent of pool size).
std::vector<TrialResult> run_trials(const ExperimentConfig& cfg);

/// One trial, optionally with a raw event log (sensible with one mode).
TrialResult run_single_trial(const ExperimentConfig& cfg, int trial,
                             std::ostream* event_log = nullptr);

SummaryTable summarize(const ExperimentConfig& cfg, const std::vector<TrialResult>& trials);

/// Fixed, versioned column set; byte-identical for identical inputs.
std::string csv_header();
std::string csv_rows(const std::vector<TrialResult>& trials);

/// Write loss/path-length/throughput/delay/node-load plot data and gnuplot
/// scripts into outdir. Validates the path-length tendency on the data
/// before writing.
void emit_plots(const SummaryTable& s, const std::string& outdir);

/// Full batch: trials, results.csv, summary.txt, plot artifacts.
SummaryTable run_experiment(const ExperimentConfig& cfg);

}  // namespace artsim
