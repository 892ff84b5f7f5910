#include "artsim/failure.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "artsim/rng.hpp"

namespace artsim {

void ConvergenceTimers::validate() const {
    if (notification_timer <= 0 || lsp_generation <= 0 || spf_timer <= 0 ||
        lsp_processing_per_hop <= 0 || spf_compute_min <= 0 || fib_update_per_ms <= 0)
        throw std::invalid_argument("convergence timers must be strictly positive");
    if (spf_compute_min > spf_compute_max)
        throw std::invalid_argument("spf_compute_min must not exceed spf_compute_max");
}

double ConvergenceTimeline::max_fib_ready() const {
    double m = 0.0;
    for (const auto& nt : node)
        if (nt.converges) m = std::max(m, nt.fib_ready);
    return m;
}

std::vector<FailureEvent> generate_failures(const Topology& t, const Path& primary, int count,
                                            double window_start, double window_end,
                                            std::uint64_t seed) {
    if (primary.hops() < 1) throw std::invalid_argument("primary path is empty");
    if (count < 1) throw std::invalid_argument("failure count must be >= 1");
    if (window_end < window_start) throw std::invalid_argument("bad failure window");

    std::vector<int> candidates;
    for (size_t i = 0; i + 1 < primary.nodes.size(); ++i)
        candidates.push_back(t.edge_index(primary.nodes[i], primary.nodes[i + 1]));
    if (count > static_cast<int>(candidates.size()))
        throw std::invalid_argument(
            "failure count exceeds the primary path's edge count (repairs disabled)");

    Rng rng(derive_seed(seed, "failures"));
    std::vector<FailureEvent> out;
    for (int i = 0; i < count; ++i) {
        size_t pick = rng.below(candidates.size());
        FailureEvent ev;
        ev.edge = candidates[pick];
        candidates.erase(candidates.begin() + static_cast<long>(pick));
        ev.fail_time = rng.uniform(window_start, window_end);
        out.push_back(ev);
    }
    std::sort(out.begin(), out.end(),
              [](const FailureEvent& a, const FailureEvent& b) { return a.fail_time < b.fail_time; });
    return out;
}

ConvergenceTimeline convergence_timeline(const Topology& t, const ConvergenceTimers& timers,
                                         const FailureEvent& ev, double detection_delay,
                                         std::uint64_t seed,
                                         const std::vector<double>* last_spf_start,
                                         const std::vector<char>* already_down) {
    timers.validate();
    const int n = t.node_count();
    const Edge& failed = t.edge(ev.edge);

    ConvergenceTimeline tl;
    tl.fail_time = ev.fail_time;
    tl.detection_time = ev.fail_time + detection_delay;
    tl.node.resize(static_cast<size_t>(n));

    // Flooding hop counts over surviving links, from the nearer endpoint.
    std::vector<int> hops(static_cast<size_t>(n), -1);
    std::deque<NodeId> bfs;
    hops[static_cast<size_t>(failed.u)] = 0;
    hops[static_cast<size_t>(failed.v)] = 0;
    bfs.push_back(failed.u);
    bfs.push_back(failed.v);
    while (!bfs.empty()) {
        NodeId x = bfs.front();
        bfs.pop_front();
        for (NodeId k : t.neighbors(x)) {
            int e = t.edge_index(x, k);
            if (e == ev.edge) continue;
            if (already_down && (*already_down)[static_cast<size_t>(e)]) continue;
            if (hops[static_cast<size_t>(k)] >= 0) continue;
            hops[static_cast<size_t>(k)] = hops[static_cast<size_t>(x)] + 1;
            bfs.push_back(k);
        }
    }

    Rng spf_rng(derive_seed(seed, "spf_compute"));
    const double fib_entries = static_cast<double>(n);
    for (NodeId v = 0; v < n; ++v) {
        auto& nt = tl.node[static_cast<size_t>(v)];
        double draw = spf_rng.uniform(timers.spf_compute_min, timers.spf_compute_max);
        if (hops[static_cast<size_t>(v)] < 0) continue;  // never hears of the failure
        nt.converges = true;
        nt.hops_from_failure = hops[static_cast<size_t>(v)];
        nt.notification = std::max(detection_delay, timers.notification_timer);
        nt.lsp_generation = timers.lsp_generation;
        nt.lsp_processing = nt.hops_from_failure * timers.lsp_processing_per_hop;
        nt.lsa_arrival = ev.fail_time + detection_delay + timers.lsp_generation +
                         nt.lsp_processing;
        double base = ev.fail_time + nt.notification + nt.lsp_generation + nt.lsp_processing;
        nt.spf_start = base;
        if (last_spf_start) {
            double earliest = (*last_spf_start)[static_cast<size_t>(v)] + timers.spf_timer;
            nt.spf_start = std::max(base, earliest);
        }
        nt.spf_wait = nt.spf_start - base;
        nt.spf_compute = draw;
        nt.fib_update = fib_entries / (timers.fib_update_per_ms * 1000.0);
        nt.fib_ready = ev.fail_time + nt.component_sum();
    }
    return tl;
}

Topology remove_edges(const Topology& t, const std::vector<int>& down_edges) {
    std::vector<char> down(static_cast<size_t>(t.edge_count()), 0);
    for (int e : down_edges) down.at(static_cast<size_t>(e)) = 1;
    std::vector<Edge> kept;
    for (int i = 0; i < t.edge_count(); ++i)
        if (!down[static_cast<size_t>(i)]) kept.push_back(t.edge(i));
    return Topology(t.labels(), std::move(kept));
}

RoutingTable reconverged_tables(const Topology& t, const std::vector<int>& down_edges) {
    return build_routing_tables(remove_edges(t, down_edges));
}

std::vector<FailureEvent> parse_failure_schedule(const std::string& text, const Topology& t) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::vector<FailureEvent> out;
    while (std::getline(in, line)) {
        ++lineno;
        bool blank = true;
        for (char c : line)
            if (c == '#') break;
            else if (!isspace(static_cast<unsigned char>(c))) {
                blank = false;
                break;
            }
        if (blank) continue;
        std::istringstream iss(line);
        std::string us, vs;
        double ft;
        if (!(iss >> us >> vs >> ft))
            throw ParseError(lineno, "expected '<u> <v> <fail_time_s> [repair_time_s]'");
        NodeId u = t.find_label(us);
        NodeId v = t.find_label(vs);
        if (u == kNoNode) throw ParseError(lineno, "unknown node '" + us + "'");
        if (v == kNoNode) throw ParseError(lineno, "unknown node '" + vs + "'");
        int e = t.edge_index(u, v);
        if (e < 0) throw ParseError(lineno, "no edge " + us + "-" + vs);
        FailureEvent ev;
        ev.edge = e;
        ev.fail_time = ft;
        double rt;
        if (iss >> rt) {
            if (rt <= ft) throw ParseError(lineno, "repair_time must exceed fail_time");
            ev.repair_time = rt;
        }
        if (ev.fail_time <= 0) throw ParseError(lineno, "fail_time must be > 0");
        out.push_back(ev);
    }
    std::sort(out.begin(), out.end(),
              [](const FailureEvent& a, const FailureEvent& b) { return a.fail_time < b.fail_time; });
    return out;
}

std::string serialize_failure_schedule(const std::vector<FailureEvent>& sched, const Topology& t) {
    std::ostringstream out;
    out.precision(17);
    for (const auto& ev : sched) {
        const Edge& e = t.edge(ev.edge);
        out << t.label(e.u) << ' ' << t.label(e.v) << ' ' << ev.fail_time;
        if (ev.repair_time) out << ' ' << *ev.repair_time;
        out << "\n";
    }
    return out.str();
}

}  // namespace artsim
