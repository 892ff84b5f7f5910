#include "artsim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "artsim/oracle.hpp"
#include "artsim/rng.hpp"

namespace artsim {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
    return out;
}

double to_double(const std::string& v, const std::string& key) {
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for '" + key + "': " + v);
    }
}

std::int64_t to_int(const std::string& v, const std::string& key) {
    try {
        size_t pos = 0;
        std::int64_t d = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("bad integer value for '" + key + "': " + v);
    }
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(9);
    os << v;
    return os.str();
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string stripped = line.substr(0, line.find('#'));
        stripped = trim(stripped);
        if (stripped.empty()) continue;
        size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = trim(stripped.substr(0, eq));
        std::string val = trim(stripped.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");

        if (key == "topology_file") cfg.topology_file = val;
        else if (key == "random_nodes") cfg.random_nodes = static_cast<int>(to_int(val, key));
        else if (key == "random_edge_prob") cfg.random_edge_prob = to_double(val, key);
        else if (key == "trials") cfg.trials = static_cast<int>(to_int(val, key));
        else if (key == "base_seed") cfg.base_seed = static_cast<std::uint64_t>(to_int(val, key));
        else if (key == "modes") {
            cfg.modes.clear();
            for (const auto& m : split_csv(val)) {
                auto parsed = parse_mode(m);
                if (!parsed) throw ConfigError("unknown mode '" + m + "'");
                cfg.modes.push_back(*parsed);
            }
        } else if (key == "duration") cfg.duration = to_double(val, key);
        else if (key == "cbr_rate") cfg.cbr_rate = to_double(val, key);
        else if (key == "cbr_start") cfg.cbr_start = to_double(val, key);
        else if (key == "packet_size") cfg.packet_size = static_cast<int>(to_int(val, key));
        else if (key == "ttl") cfg.ttl = static_cast<int>(to_int(val, key));
        else if (key == "flow_src") cfg.flow_src = val;
        else if (key == "flow_dst") cfg.flow_dst = val;
        else if (key == "flow_min_hops") cfg.flow_min_hops = static_cast<int>(to_int(val, key));
        else if (key == "failure_count") cfg.failure_count = static_cast<int>(to_int(val, key));
        else if (key == "failure_window_start") cfg.failure_window_start = to_double(val, key);
        else if (key == "failure_window_end") cfg.failure_window_end = to_double(val, key);
        else if (key == "failure_schedule_file") cfg.failure_schedule_file = val;
        else if (key == "notification_timer") cfg.timers.notification_timer = to_double(val, key);
        else if (key == "lsp_generation") cfg.timers.lsp_generation = to_double(val, key);
        else if (key == "spf_timer") cfg.timers.spf_timer = to_double(val, key);
        else if (key == "lsp_processing_per_hop")
            cfg.timers.lsp_processing_per_hop = to_double(val, key);
        else if (key == "spf_compute_min") cfg.timers.spf_compute_min = to_double(val, key);
        else if (key == "spf_compute_max") cfg.timers.spf_compute_max = to_double(val, key);
        else if (key == "fib_update_per_ms") cfg.timers.fib_update_per_ms = to_double(val, key);
        else if (key == "detection_delay") cfg.detection_delay = to_double(val, key);
        else if (key == "ls_failure_behavior") {
            if (val == "bounce") cfg.ls_failure_behavior = LsFailureBehavior::BounceToPrevious;
            else if (val == "drop") cfg.ls_failure_behavior = LsFailureBehavior::DropAtFailure;
            else throw ConfigError("ls_failure_behavior must be 'bounce' or 'drop'");
        } else if (key == "disjointness") {
            if (val == "interior-node") cfg.disjointness = Disjointness::InteriorNode;
            else if (val == "edge") cfg.disjointness = Disjointness::EdgeOnly;
            else throw ConfigError("disjointness must be 'interior-node' or 'edge'");
        } else if (key == "out_dir") cfg.out_dir = val;
        else if (key == "workers") cfg.workers = static_cast<int>(to_int(val, key));
        else throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

void ExperimentConfig::validate() const {
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (modes.empty()) throw ConfigError("at least one mode required");
    if (!topology_file && random_nodes < 2) throw ConfigError("random_nodes must be >= 2");
    if (random_edge_prob < 0 || random_edge_prob > 1)
        throw ConfigError("random_edge_prob must be in [0, 1]");
    if (flow_src.has_value() != flow_dst.has_value())
        throw ConfigError("flow_src and flow_dst must be given together");
    if (failure_count < 0) throw ConfigError("failure_count must be >= 0");
    if (failure_window_start > failure_window_end)
        throw ConfigError("failure window is inverted");
    if (duration <= 0 || cbr_rate <= 0 || cbr_start < 0 || cbr_start >= duration)
        throw ConfigError("bad traffic timing");
    if (packet_size < 1 || ttl < 1) throw ConfigError("bad packet parameters");
    if (workers < 0) throw ConfigError("workers must be >= 0");
    try {
        timers.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

namespace {

Flow pick_flow(const ExperimentConfig& cfg, const Topology& t, const RoutingTable& tr,
               std::uint64_t trial_seed) {
    if (cfg.flow_src) {
        NodeId s = t.find_label(*cfg.flow_src);
        NodeId d = t.find_label(*cfg.flow_dst);
        if (s == kNoNode || d == kNoNode) throw ConfigError("flow endpoints not in topology");
        return {s, d};
    }
    std::vector<Flow> candidates;
    int min_hops = cfg.flow_min_hops;
    while (candidates.empty() && min_hops >= 1) {
        for (NodeId s = 0; s < t.node_count(); ++s)
            for (NodeId d = 0; d < t.node_count(); ++d) {
                if (s == d || !tr.reachable(s, d)) continue;
                if (primary_path(tr, s, d).hops() >= min_hops) candidates.push_back({s, d});
            }
        if (candidates.empty()) --min_hops;
    }
    if (candidates.empty()) throw ConfigError("topology has no usable flow pair");
    Rng rng(derive_seed(trial_seed, "flow"));
    return candidates[rng.below(candidates.size())];
}

TrialResult run_one_trial(const ExperimentConfig& cfg, int trial,
                          const Topology* fixed_topo,
                          const std::vector<FailureEvent>* fixed_sched,
                          std::ostream* event_log = nullptr) {
    std::uint64_t trial_seed = cfg.base_seed + static_cast<std::uint64_t>(trial);
    TrialResult result;
    result.trial = trial;
    result.topo = fixed_topo ? *fixed_topo
                             : random_topology(cfg.random_nodes, cfg.random_edge_prob,
                                               derive_seed(trial_seed, "topology"));
    const Topology& t = result.topo;
    RoutingTable tr = build_routing_tables(t);
    result.flow = pick_flow(cfg, t, tr, trial_seed);
    Path primary = primary_path(tr, result.flow.src, result.flow.dst);
    result.primary_hops = primary.hops();

    if (fixed_sched) {
        result.sched = *fixed_sched;
    } else if (cfg.failure_count > 0) {
        int count = std::min(cfg.failure_count, primary.hops());
        result.sched = generate_failures(t, primary, count, cfg.failure_window_start,
                                         std::min(cfg.failure_window_end, cfg.duration),
                                         derive_seed(trial_seed, "failures"));
    }

    SimConfig sim_cfg;
    sim_cfg.duration = cfg.duration;
    sim_cfg.cbr_rate = cfg.cbr_rate;
    sim_cfg.cbr_start = cfg.cbr_start;
    sim_cfg.packet_size = cfg.packet_size;
    sim_cfg.flows = {result.flow};
    sim_cfg.ttl_init = cfg.ttl;
    sim_cfg.seed = derive_seed(trial_seed, "sim");
    sim_cfg.timers = cfg.timers;
    sim_cfg.detection_delay = cfg.detection_delay;
    sim_cfg.ls_failure_behavior = cfg.ls_failure_behavior;

    for (ForwardingMode mode : cfg.modes) {
        TrialModeResult tm;
        tm.mode = mode;
        sim_cfg.mode = mode;
        if (mode == ForwardingMode::LS) {
            tm.rec = run(t, tr, nullptr, result.sched, sim_cfg, event_log);
            tm.node_control.assign(static_cast<size_t>(t.node_count()), 0);
        } else {
            auto [bt, ledger] = build_backup_tables(tr, t, mode, cfg.disjointness);
            tm.rec = run(t, tr, &bt, result.sched, sim_cfg, event_log);
            tm.control_msgs_total = ledger.total_enquiries() + ledger.total_replies();
            tm.control_node_events = ledger.total_node_events();
            tm.node_control.resize(static_cast<size_t>(t.node_count()));
            for (int v = 0; v < t.node_count(); ++v)
                tm.node_control[static_cast<size_t>(v)] = ledger.node[static_cast<size_t>(v)].total();
        }
        for (int v = 0; v < t.node_count(); ++v) {
            std::uint64_t load = tm.rec.node_forwarding[static_cast<size_t>(v)] +
                                 tm.node_control[static_cast<size_t>(v)];
            tm.total_load += load;
            tm.max_node_load = std::max(tm.max_node_load, load);
        }
        result.per_mode.push_back(std::move(tm));
    }
    return result;
}

struct FixedInputs {
    std::optional<Topology> topo;
    std::optional<std::vector<FailureEvent>> sched;
};

FixedInputs load_fixed_inputs(const ExperimentConfig& cfg) {
    FixedInputs fixed;
    if (cfg.topology_file) {
        std::ifstream in(*cfg.topology_file);
        if (!in) throw std::ios_base::failure("cannot open " + *cfg.topology_file);
        std::stringstream ss;
        ss << in.rdbuf();
        fixed.topo = parse_topology(ss.str());
    }
    if (cfg.failure_schedule_file) {
        if (!fixed.topo) throw ConfigError("failure_schedule_file requires topology_file");
        std::ifstream in(*cfg.failure_schedule_file);
        if (!in) throw std::ios_base::failure("cannot open " + *cfg.failure_schedule_file);
        std::stringstream ss;
        ss << in.rdbuf();
        fixed.sched = parse_failure_schedule(ss.str(), *fixed.topo);
    }
    return fixed;
}

}  // namespace

TrialResult run_single_trial(const ExperimentConfig& cfg, int trial, std::ostream* event_log) {
    FixedInputs fixed = load_fixed_inputs(cfg);
    return run_one_trial(cfg, trial, fixed.topo ? &*fixed.topo : nullptr,
                         fixed.sched ? &*fixed.sched : nullptr, event_log);
}

std::vector<TrialResult> run_trials(const ExperimentConfig& cfg) {
    FixedInputs fixed = load_fixed_inputs(cfg);
    const Topology* fixed_topo = fixed.topo ? &*fixed.topo : nullptr;
    const std::vector<FailureEvent>* fixed_sched = fixed.sched ? &*fixed.sched : nullptr;

    std::vector<TrialResult> results(static_cast<size_t>(cfg.trials));
    int workers = cfg.workers > 0 ? cfg.workers
                                  : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<int>(workers, cfg.trials);

    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (int i = next.fetch_add(1); i < cfg.trials; i = next.fetch_add(1))
                    results[static_cast<size_t>(i)] =
                        run_one_trial(cfg, i, fixed_topo, fixed_sched);
            } catch (...) {
                errors[static_cast<size_t>(w)] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

std::string csv_header() {
    return "trial,mode,primary_len,backup_len,new_primary_len,sent,delivered,"
           "dropped_link_down,dropped_ttl,dropped_queue,mean_delay_s,throughput_bps_mean,"
           "control_msgs_total,max_node_load";
}

std::string csv_rows(const std::vector<TrialResult>& trials) {
    std::ostringstream out;
    for (const auto& tr : trials)
        for (const auto& tm : tr.per_mode) {
            const MetricsRecord& r = tm.rec;
            double span = 0;  // delivered-bits averaging span
            out << tr.trial << ',' << to_string(tm.mode) << ',' << fmt(r.avg_primary_len) << ','
                << fmt(r.avg_backup_len) << ',' << fmt(r.avg_new_primary_len) << ',' << r.sent
                << ',' << r.delivered << ',' << r.dropped_link_down << ',' << r.dropped_ttl
                << ',' << r.dropped_queue << ',' << fmt(r.mean_delay()) << ',';
            (void)span;
            double bins = 0, sum = 0;
            for (double b : r.throughput_bins) sum += b;
            bins = static_cast<double>(r.throughput_bins.size());
            out << fmt(bins > 0 ? sum / bins : 0.0) << ',' << tm.control_msgs_total << ','
                << tm.max_node_load << '\n';
        }
    return out.str();
}

namespace {

Stat make_stat(const std::vector<double>& xs) {
    Stat s;
    if (xs.empty()) return s;
    s.count = xs.size();
    s.min = xs[0];
    s.max = xs[0];
    double sum = 0;
    for (double x : xs) {
        sum += x;
        s.min = std::min(s.min, x);
        s.max = std::max(s.max, x);
    }
    s.mean = sum / static_cast<double>(xs.size());
    double var = 0;
    for (double x : xs) var += (x - s.mean) * (x - s.mean);
    s.stddev = xs.size() > 1 ? std::sqrt(var / static_cast<double>(xs.size() - 1)) : 0.0;
    return s;
}

}  // namespace

SummaryTable summarize(const ExperimentConfig& cfg, const std::vector<TrialResult>& trials) {
    SummaryTable s;
    s.trials = static_cast<int>(trials.size());
    s.modes = cfg.modes;

    for (ForwardingMode mode : cfg.modes) {
        std::string mname = to_string(mode);
        std::map<std::string, std::vector<double>> samples;
        std::map<int, std::vector<double>> drops_by_hops;
        std::vector<double> bins_sum;
        std::vector<double> node_load_sum;
        std::uint64_t bins_trials = 0;

        for (const auto& tr : trials) {
            const TrialModeResult* tm = nullptr;
            for (const auto& cand : tr.per_mode)
                if (cand.mode == mode) tm = &cand;
            if (!tm) continue;
            const MetricsRecord& r = tm->rec;
            samples["drops"].push_back(static_cast<double>(r.drops_total()));
            samples["delivered"].push_back(static_cast<double>(r.delivered));
            samples["mean_delay_s"].push_back(r.mean_delay());
            samples["window_delay_s"].push_back(r.mean_window_delay());
            double sum = 0;
            for (double b : r.throughput_bins) sum += b;
            samples["throughput_bps"].push_back(
                r.throughput_bins.empty() ? 0.0 : sum / static_cast<double>(r.throughput_bins.size()));
            samples["primary_len"].push_back(r.avg_primary_len);
            if (r.avg_backup_len > 0) samples["backup_len"].push_back(r.avg_backup_len);
            if (r.avg_new_primary_len > 0)
                samples["new_primary_len"].push_back(r.avg_new_primary_len);
            samples["control_msgs"].push_back(static_cast<double>(tm->control_msgs_total));
            samples["max_node_load"].push_back(static_cast<double>(tm->max_node_load));
            samples["total_load"].push_back(static_cast<double>(tm->total_load));
            drops_by_hops[tr.primary_hops].push_back(static_cast<double>(r.drops_total()));

            if (bins_sum.size() < r.throughput_bins.size())
                bins_sum.resize(r.throughput_bins.size(), 0.0);
            for (size_t i = 0; i < r.throughput_bins.size(); ++i) bins_sum[i] += r.throughput_bins[i];
            ++bins_trials;
            size_t n = tm->rec.node_forwarding.size();
            if (node_load_sum.size() < n) node_load_sum.resize(n, 0.0);
            for (size_t v = 0; v < n; ++v)
                node_load_sum[v] += static_cast<double>(tm->rec.node_forwarding[v] +
                                                        tm->node_control[v]);
        }
        for (auto& [metric, xs] : samples) s.by_metric[metric][mname] = make_stat(xs);
        for (auto& [hops, xs] : drops_by_hops) s.loss_by_hops[hops][mname] = make_stat(xs);
        if (bins_trials) {
            for (auto& b : bins_sum) b /= static_cast<double>(bins_trials);
            s.throughput_series[mname] = std::move(bins_sum);
            for (auto& b : node_load_sum) b /= static_cast<double>(bins_trials);
            s.node_load[mname] = std::move(node_load_sum);
        }
    }
    return s;
}

std::string SummaryTable::to_text() const {
    std::ostringstream out;
    out << "trials: " << trials << "\n";
    for (const auto& [metric, per_mode] : by_metric) {
        out << metric << ":\n";
        for (const auto& [mode, st] : per_mode)
            out << "  " << mode << "  mean=" << fmt(st.mean) << " stddev=" << fmt(st.stddev)
                << " min=" << fmt(st.min) << " max=" << fmt(st.max) << " n=" << st.count << "\n";
    }
    out << "loss_by_primary_hops:\n";
    for (const auto& [hops, per_mode] : loss_by_hops) {
        out << "  hops=" << hops << ":";
        for (const auto& [mode, st] : per_mode)
            out << "  " << mode << "=" << fmt(st.mean) << " (n=" << st.count << ")";
        out << "\n";
    }
    return out.str();
}

namespace {

void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot write " + p.string());
    out << content;
}

std::string gp_preamble(const std::string& title, const std::string& out_png) {
    std::ostringstream os;
    os << "set terminal svg size 800,600\n"
       << "set output '" << out_png << "'\n"
       << "set title '" << title << "'\n"
       << "set key outside\n";
    return os.str();
}

}  // namespace

void emit_plots(const SummaryTable& s, const std::string& outdir) {
    namespace fs = std::filesystem;
    fs::create_directories(outdir);
    fs::path dir(outdir);

    // Path-length tendency check before anything is written.
    auto backup = s.by_metric.find("backup_len");
    auto prim = s.by_metric.find("primary_len");
    if (backup != s.by_metric.end() && prim != s.by_metric.end()) {
        auto fb = backup->second.find("artfp");
        auto fp = prim->second.find("artfp");
        if (fb != backup->second.end() && fp != prim->second.end() && fb->second.count > 0 &&
            fb->second.mean + 1e-9 < fp->second.mean)
            throw std::logic_error("backup paths shorter than primaries; refusing to plot");
    }

    // Loss vs primary hop count.
    {
        std::ostringstream dat;
        dat << "# hops";
        for (const auto& m : s.modes) dat << ' ' << to_string(m);
        dat << '\n';
        for (const auto& [hops, per_mode] : s.loss_by_hops) {
            dat << hops;
            for (const auto& m : s.modes) {
                auto it = per_mode.find(to_string(m));
                dat << ' ' << (it == per_mode.end() ? std::string("-") : fmt(it->second.mean));
            }
            dat << '\n';
        }
        write_file(dir / "loss_vs_hops.dat", dat.str());
        std::ostringstream gp;
        gp << gp_preamble("Mean packet loss vs primary hop count", "loss_vs_hops.svg")
           << "set xlabel 'primary path hops'\nset ylabel 'mean dropped packets'\n"
           << "plot";
        for (size_t i = 0; i < s.modes.size(); ++i)
            gp << (i ? "," : "") << " 'loss_vs_hops.dat' using 1:" << i + 2
               << " with linespoints title '" << to_string(s.modes[i]) << "'";
        gp << "\n";
        write_file(dir / "loss_vs_hops.gp", gp.str());
    }

    // Grouped path-length bars.
    {
        std::ostringstream dat;
        dat << "# metric";
        for (const auto& m : s.modes) dat << ' ' << to_string(m);
        dat << '\n';
        for (const std::string metric : {"primary_len", "backup_len", "new_primary_len"}) {
            dat << metric;
            auto it = s.by_metric.find(metric);
            for (const auto& m : s.modes) {
                double v = 0;
                if (it != s.by_metric.end()) {
                    auto jt = it->second.find(to_string(m));
                    if (jt != it->second.end()) v = jt->second.mean;
                }
                dat << ' ' << fmt(v);
            }
            dat << '\n';
        }
        write_file(dir / "path_length.dat", dat.str());
        std::ostringstream gp;
        gp << gp_preamble("Average path length", "path_length.svg")
           << "set style data histogram\nset style histogram cluster gap 1\n"
           << "set style fill solid\nset ylabel 'hops'\n"
           << "plot";
        for (size_t i = 0; i < s.modes.size(); ++i)
            gp << (i ? "," : "") << " 'path_length.dat' using " << i + 2
               << ":xtic(1) title '" << to_string(s.modes[i]) << "'";
        gp << "\n";
        write_file(dir / "path_length.gp", gp.str());
    }

    // Throughput time series.
    {
        std::ostringstream dat;
        dat << "# second";
        for (const auto& m : s.modes) dat << ' ' << to_string(m);
        dat << '\n';
        size_t bins = 0;
        for (const auto& [mode, series] : s.throughput_series) bins = std::max(bins, series.size());
        for (size_t b = 0; b < bins; ++b) {
            dat << b;
            for (const auto& m : s.modes) {
                auto it = s.throughput_series.find(to_string(m));
                dat << ' '
                    << (it != s.throughput_series.end() && b < it->second.size()
                            ? fmt(it->second[b])
                            : std::string("0"));
            }
            dat << '\n';
        }
        write_file(dir / "throughput.dat", dat.str());
        std::ostringstream gp;
        gp << gp_preamble("Delivered throughput over time", "throughput.svg")
           << "set xlabel 'time (s)'\nset ylabel 'bits per second'\n"
           << "plot";
        for (size_t i = 0; i < s.modes.size(); ++i)
            gp << (i ? "," : "") << " 'throughput.dat' using 1:" << i + 2 << " with lines title '"
               << to_string(s.modes[i]) << "'";
        gp << "\n";
        write_file(dir / "throughput.gp", gp.str());
    }

    // End-to-end delay bars.
    {
        std::ostringstream dat;
        dat << "# metric";
        for (const auto& m : s.modes) dat << ' ' << to_string(m);
        dat << '\n';
        for (const std::string metric : {"mean_delay_s", "window_delay_s"}) {
            dat << metric;
            auto it = s.by_metric.find(metric);
            for (const auto& m : s.modes) {
                double v = 0;
                if (it != s.by_metric.end()) {
                    auto jt = it->second.find(to_string(m));
                    if (jt != it->second.end()) v = jt->second.mean;
                }
                dat << ' ' << fmt(v);
            }
            dat << '\n';
        }
        write_file(dir / "delay.dat", dat.str());
        std::ostringstream gp;
        gp << gp_preamble("End-to-end delay", "delay.svg")
           << "set style data histogram\nset style histogram cluster gap 1\n"
           << "set style fill solid\nset ylabel 'seconds'\n"
           << "plot";
        for (size_t i = 0; i < s.modes.size(); ++i)
            gp << (i ? "," : "") << " 'delay.dat' using " << i + 2 << ":xtic(1) title '"
               << to_string(s.modes[i]) << "'";
        gp << "\n";
        write_file(dir / "delay.gp", gp.str());
    }

    // Per-node load.
    {
        std::ostringstream dat;
        dat << "# node";
        for (const auto& m : s.modes) dat << ' ' << to_string(m);
        dat << '\n';
        size_t n = 0;
        for (const auto& [mode, loads] : s.node_load) n = std::max(n, loads.size());
        for (size_t v = 0; v < n; ++v) {
            dat << v;
            for (const auto& m : s.modes) {
                auto it = s.node_load.find(to_string(m));
                dat << ' '
                    << (it != s.node_load.end() && v < it->second.size() ? fmt(it->second[v])
                                                                         : std::string("0"));
            }
            dat << '\n';
        }
        write_file(dir / "node_load.dat", dat.str());
        std::ostringstream gp;
        gp << gp_preamble("Per-node load (forwarding + control)", "node_load.svg")
           << "set xlabel 'node id'\nset ylabel 'packets + messages'\n"
           << "plot";
        for (size_t i = 0; i < s.modes.size(); ++i)
            gp << (i ? "," : "") << " 'node_load.dat' using 1:" << i + 2
               << " with linespoints title '" << to_string(s.modes[i]) << "'";
        gp << "\n";
        write_file(dir / "node_load.gp", gp.str());
    }
}

SummaryTable run_experiment(const ExperimentConfig& cfg) {
    auto trials = run_trials(cfg);
    SummaryTable summary = summarize(cfg, trials);

    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    write_file(fs::path(cfg.out_dir) / "results.csv",
               "# artsim csv schema 1\n" + csv_header() + "\n" + csv_rows(trials));
    write_file(fs::path(cfg.out_dir) / "summary.txt", summary.to_text());
    emit_plots(summary, cfg.out_dir);
    return summary;
}

}  // namespace artsim
