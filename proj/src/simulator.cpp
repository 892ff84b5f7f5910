#include "artsim/simulator.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <deque>
#include <limits>
#include <memory>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "artsim/rng.hpp"

namespace artsim {

void SimConfig::validate() const {
    if (duration <= 0) throw std::invalid_argument("duration must be > 0");
    if (cbr_rate <= 0) throw std::invalid_argument("cbr_rate must be > 0");
    if (cbr_start < 0 || cbr_start >= duration)
        throw std::invalid_argument("cbr_start must lie in [0, duration)");
    if (packet_size < 1) throw std::invalid_argument("packet_size must be >= 1");
    if (ttl_init < 1) throw std::invalid_argument("ttl_init must be >= 1");
    if (flows.empty()) throw std::invalid_argument("at least one flow required");
    if (detection_delay < 0) throw std::invalid_argument("detection_delay must be >= 0");
    timers.validate();
}

std::string MetricsRecord::fingerprint() const {
    std::ostringstream out;
    out.precision(17);
    out << sent << ' ' << delivered << ' ' << dropped_link_down << ' ' << dropped_ttl << ' '
        << dropped_queue << ' ' << dropped_unreachable << ' ' << in_flight_at_end << ' '
        << total_delay << ' ' << total_hops << ' ' << delivered_bits << '\n';
    for (double b : throughput_bins) out << b << ' ';
    out << '\n';
    for (auto f : node_forwarding) out << f << ' ';
    out << '\n';
    out << window_created << ' ' << window_delivered << ' ' << window_dropped << ' '
        << window_delay_sum << ' ' << avg_primary_len << ' ' << avg_backup_len << ' '
        << avg_new_primary_len << '\n';
    return out.str();
}

namespace {

struct Packet {
    std::uint64_t id = 0;
    int flow = 0;
    NodeId src = kNoNode;
    NodeId dst = kNoNode;
    double created_at = 0.0;
    int ttl = 0;
    NodeId prev_node = kNoNode;
    double prop_sum = 0.0;  // accumulated propagation delay
    int hops = 0;
    // Pinned backup route: packet follows route_path from route_pos onward.
    const Path* route_path = nullptr;
    size_t route_pos = 0;
    bool counted_window = false;
    bool alive = true;
};

enum class EventKind { Generate, TxDone, Arrival, LinkChange, FibReady };

struct Event {
    EventKind kind;
    double time = 0.0;
    std::uint64_t pkt = 0;    // Arrival, TxDone (packet in service)
    int a = 0;                // node / edge / epoch, by kind
    int b = 0;                // direction or aux
    bool cancelled = false;
};

// One directed transmitter with a drop-tail queue.
struct LinkDir {
    bool busy = false;
    std::uint64_t in_service = 0;
    int tx_event = -1;                  // index of pending TxDone
    std::deque<std::uint64_t> queue;    // waiting packets
    std::vector<int> pending_arrivals;  // event indices propagating on the wire
};

struct LinkState {
    bool up = true;
    double detect_time = std::numeric_limits<double>::infinity();
    LinkDir dir[2];  // 0: u->v, 1: v->u
};

// A reconvergence epoch: the table that reflects the topology after the
// k-th change, plus when each node starts using it.
struct Epoch {
    RoutingTable table;
    ConvergenceTimeline timeline;
    int changed_edge = -1;
    bool came_up = false;
};

struct FlowState {
    Flow flow;
    Path primary;                       // on the original tables
    const BackupEntry* artfp = nullptr; // protected source entry, if any
    // Full-path tagging windows: [notified, source's fib-ready).
    std::vector<std::pair<double, double>> tag_windows;
    bool tag_active(double now) const {
        for (auto [from, until] : tag_windows)
            if (now >= from && now < until) return true;
        return false;
    }
};

struct Sim {
    const Topology& t;
    const RoutingTable& tr;
    const BackupTable* bt;
    const SimConfig& cfg;
    std::ostream* log;

    std::vector<Packet> packets;
    std::vector<Event> events;
    using QItem = std::pair<double, std::uint64_t>;  // (time, seq); seq breaks ties
    std::priority_queue<QItem, std::vector<QItem>, std::greater<>> pq;
    std::uint64_t seq = 0;

    std::vector<LinkState> links;
    std::vector<Epoch> epochs;            // epoch 0 = original tables
    std::vector<int> node_epoch;          // active epoch per node
    std::vector<FlowState> flows;
    std::vector<double> last_spf_start;
    std::vector<char> down_now;           // current down set, by edge
    std::vector<FailureEvent> sched;

    MetricsRecord rec;
    double now = 0.0;

    Sim(const Topology& t_, const RoutingTable& tr_, const BackupTable* bt_,
        const std::vector<FailureEvent>& sched_, const SimConfig& cfg_, std::ostream* log_)
        : t(t_), tr(tr_), bt(bt_), cfg(cfg_), log(log_), sched(sched_) {}

    int push_event(Event e) {
        events.push_back(e);
        pq.push({e.time, seq++});
        return static_cast<int>(events.size()) - 1;
    }

    void logline(const std::string& kind, std::uint64_t pkt, NodeId node,
                 const std::string& detail) {
        if (!log) return;
        std::ostringstream os;
        os.precision(9);
        os << std::fixed << now << ' ' << kind << ' ' << pkt << ' '
           << (node == kNoNode ? std::string("-") : t.label(node)) << ' ' << detail << '\n';
        (*log) << os.str();
    }

    // ---- setup ------------------------------------------------------------

    void build_epochs() {
        const int n = t.node_count();
        node_epoch.assign(static_cast<size_t>(n), 0);
        last_spf_start.assign(static_cast<size_t>(n),
                              -std::numeric_limits<double>::infinity());
        down_now.assign(static_cast<size_t>(t.edge_count()), 0);

        Epoch initial;
        initial.table = tr;
        epochs.push_back(std::move(initial));

        // Failures (and repairs) are known up front, so the post-change
        // tables and per-node switchover instants can be precomputed.
        struct Change {
            double time;
            int edge;
            bool up;
        };
        std::vector<Change> changes;
        for (const auto& ev : sched) {
            changes.push_back({ev.fail_time, ev.edge, false});
            if (ev.repair_time) changes.push_back({*ev.repair_time, ev.edge, true});
        }
        std::sort(changes.begin(), changes.end(),
                  [](const Change& a, const Change& b) { return a.time < b.time; });

        std::vector<char> down(static_cast<size_t>(t.edge_count()), 0);
        int epoch_id = 0;
        for (const auto& ch : changes) {
            down[static_cast<size_t>(ch.edge)] = ch.up ? 0 : 1;
            ++epoch_id;
            Epoch ep;
            ep.changed_edge = ch.edge;
            ep.came_up = ch.up;
            std::vector<int> down_list;
            for (int e = 0; e < t.edge_count(); ++e)
                if (down[static_cast<size_t>(e)]) down_list.push_back(e);
            ep.table = reconverged_tables(t, down_list);
            FailureEvent pseudo;
            pseudo.edge = ch.edge;
            pseudo.fail_time = ch.time;
            ep.timeline = convergence_timeline(t, cfg.timers, pseudo, cfg.detection_delay,
                                               derive_seed(cfg.seed, "spf") + epoch_id,
                                               &last_spf_start, &down);
            for (NodeId v = 0; v < t.node_count(); ++v) {
                const auto& nt = ep.timeline.node[static_cast<size_t>(v)];
                if (!nt.converges) continue;
                last_spf_start[static_cast<size_t>(v)] = nt.spf_start;
                Event fe;
                fe.kind = EventKind::FibReady;
                fe.time = nt.fib_ready;
                fe.a = v;
                fe.b = epoch_id;
                push_event(fe);
            }
            epochs.push_back(std::move(ep));

            Event le;
            le.kind = EventKind::LinkChange;
            le.time = ch.time;
            le.a = ch.edge;
            le.b = ch.up ? 1 : 0;
            push_event(le);
        }
    }

    void setup_flows() {
        for (const Flow& f : cfg.flows) {
            FlowState fs;
            fs.flow = f;
            if (tr.reachable(f.src, f.dst) && f.src != f.dst)
                fs.primary = primary_path(tr, f.src, f.dst);
            if (bt && cfg.mode == ForwardingMode::ARTFP)
                fs.artfp = bt->artfp_entry(f.src, f.dst);
            flows.push_back(std::move(fs));
        }

        // Full-path mode: the source learns of a failure when the flooded
        // announcement reaches it; it steers onto the backup path from then
        // until its own table reflects the new topology.
        if (cfg.mode == ForwardingMode::ARTFP) {
            for (size_t k = 1; k < epochs.size(); ++k) {
                const Epoch& ep = epochs[k];
                if (ep.came_up) continue;
                for (auto& fs : flows) {
                    if (!fs.artfp) continue;
                    if (!on_path(fs.primary, ep.changed_edge)) continue;
                    const auto& nt = ep.timeline.node[static_cast<size_t>(fs.flow.src)];
                    if (!nt.converges) continue;
                    fs.tag_windows.push_back({nt.lsa_arrival, nt.fib_ready});
                }
            }
        }
    }

    bool on_path(const Path& p, int edge) const {
        for (size_t i = 0; i + 1 < p.nodes.size(); ++i)
            if (t.edge_index(p.nodes[i], p.nodes[i + 1]) == edge) return true;
        return false;
    }

    // ---- forwarding -------------------------------------------------------

    const RoutingTable& table_at(NodeId v) const {
        return epochs[static_cast<size_t>(node_epoch[static_cast<size_t>(v)])].table;
    }

    void drop(Packet& p, DropReason r, NodeId at) {
        p.alive = false;
        switch (r) {
            case DropReason::LinkDown: rec.dropped_link_down++; break;
            case DropReason::TtlExpired: rec.dropped_ttl++; break;
            case DropReason::QueueFull: rec.dropped_queue++; break;
            case DropReason::Unreachable: rec.dropped_unreachable++; break;
        }
        if (p.counted_window) rec.window_dropped++;
        const char* names[] = {"link_down", "ttl_expired", "queue_full", "unreachable"};
        logline("drop", p.id, at, names[static_cast<int>(r)]);
    }

    void deliver(Packet& p, NodeId at) {
        p.alive = false;
        rec.delivered++;
        double delay = now - p.created_at;
        rec.total_delay += delay;
        rec.total_hops += static_cast<std::uint64_t>(p.hops);
        double bits = cfg.packet_size * 8.0;
        rec.delivered_bits += bits;
        size_t bin = static_cast<size_t>(now);
        if (bin < rec.throughput_bins.size()) rec.throughput_bins[bin] += bits;
        if (p.counted_window) {
            rec.window_delivered++;
            rec.window_delay_sum += delay;
        }
        if (cfg.check_invariants && delay + 1e-12 < p.prop_sum)
            throw std::logic_error("delivered packet beat the speed of its own links");
        logline("deliver", p.id, at, "delay=" + std::to_string(delay));
    }

    void transmit(Packet& p, NodeId from, NodeId to) {
        // TTL spent per hop; generation's first send included.
        if (p.ttl == 0) {
            drop(p, DropReason::TtlExpired, from);
            return;
        }
        p.ttl--;
        rec.node_forwarding[static_cast<size_t>(from)]++;
        int e = t.edge_index(from, to);
        LinkState& ls = links[static_cast<size_t>(e)];
        int dir = (t.edge(e).u == from) ? 0 : 1;
        LinkDir& ld = ls.dir[dir];
        if (ld.busy) {
            if (static_cast<int>(ld.queue.size()) >= t.edge(e).queue_limit) {
                drop(p, DropReason::QueueFull, from);
                return;
            }
            ld.queue.push_back(p.id);
            return;
        }
        start_service(e, dir, p.id);
    }

    void start_service(int e, int dir, std::uint64_t pkt) {
        LinkState& ls = links[static_cast<size_t>(e)];
        LinkDir& ld = ls.dir[dir];
        ld.busy = true;
        ld.in_service = pkt;
        Event ev;
        ev.kind = EventKind::TxDone;
        ev.time = now + serialization_delay(t.edge(e), cfg.packet_size);
        ev.pkt = pkt;
        ev.a = e;
        ev.b = dir;
        ld.tx_event = push_event(ev);
    }

    void handle_txdone(const Event& ev) {
        int e = ev.a, dir = ev.b;
        LinkState& ls = links[static_cast<size_t>(e)];
        LinkDir& ld = ls.dir[dir];
        Packet& p = packets[ev.pkt];
        // Bits leave the transmitter and propagate.
        NodeId to = dir == 0 ? t.edge(e).v : t.edge(e).u;
        Event arr;
        arr.kind = EventKind::Arrival;
        arr.time = now + t.edge(e).prop_delay;
        arr.pkt = p.id;
        arr.a = to;
        arr.b = e;
        int idx = push_event(arr);
        ld.pending_arrivals.push_back(idx);
        p.prop_sum += t.edge(e).prop_delay;

        ld.busy = false;
        ld.tx_event = -1;
        ld.in_service = 0;
        if (!ld.queue.empty()) {
            std::uint64_t nxt = ld.queue.front();
            ld.queue.pop_front();
            start_service(e, dir, nxt);
        }
    }

    void handle_arrival(const Event& ev, int ev_index) {
        // Remove from the wire bookkeeping.
        LinkState& ls = links[static_cast<size_t>(ev.b)];
        for (int dir = 0; dir < 2; ++dir) {
            auto& pa = ls.dir[dir].pending_arrivals;
            for (size_t i = 0; i < pa.size(); ++i)
                if (pa[i] == ev_index) {
                    pa[i] = pa.back();
                    pa.pop_back();
                    dir = 2;
                    break;
                }
        }
        Packet& p = packets[ev.pkt];
        NodeId at = ev.a;
        const Edge& e = t.edge(ev.b);
        p.prev_node = e.other(at);
        p.hops++;
        if (p.route_path) {
            // Tagged packets must follow their pinned path exactly.
            if (cfg.check_invariants &&
                (p.route_pos + 1 >= p.route_path->nodes.size() ||
                 p.route_path->nodes[p.route_pos + 1] != at))
                throw std::logic_error("tagged packet strayed from its pinned path");
            p.route_pos++;
        }
        forward(p, at);
    }

    void pin_route(Packet& p, const Path& path, NodeId at) {
        p.route_path = &path;
        p.route_pos = 0;
        assert(path.nodes.front() == at);
        (void)at;
        logline("tag", p.id, at, "len=" + std::to_string(path.hops()));
    }

    void forward(Packet& p, NodeId at) {
        if (at == p.dst) {
            deliver(p, at);
            return;
        }
        if (p.route_path) {
            NodeId next = p.route_path->nodes[p.route_pos + 1];
            int e = t.edge_index(at, next);
            if (!links[static_cast<size_t>(e)].up) {
                // A second failure severed the pinned backup path.
                drop(p, DropReason::LinkDown, at);
                return;
            }
            transmit(p, at, next);
            return;
        }

        // Full-path mode: a notified source steers its traffic onto the
        // precomputed disjoint path until its own table is rebuilt.
        if (cfg.mode == ForwardingMode::ARTFP) {
            FlowState& fs = flows[static_cast<size_t>(p.flow)];
            if (at == fs.flow.src && p.dst == fs.flow.dst && fs.artfp && fs.tag_active(now)) {
                pin_route(p, fs.artfp->alt, at);
                forward(p, at);
                return;
            }
        }

        const RoutingTable& table = table_at(at);
        NodeId next = table.next_hop(at, p.dst);
        if (next == kNoNode) {
            drop(p, DropReason::Unreachable, at);
            return;
        }
        int e = t.edge_index(at, next);
        LinkState& ls = links[static_cast<size_t>(e)];
        if (ls.up) {
            transmit(p, at, next);
            return;
        }

        // The stale table points into a dead link.
        if (now < ls.detect_time) {
            // Not yet detected: the node transmits into the void.
            drop(p, DropReason::LinkDown, at);
            return;
        }
        if (cfg.mode == ForwardingMode::ARTCP && bt) {
            FlowState& fs = flows[static_cast<size_t>(p.flow)];
            const BackupEntry* entry =
                bt->artcp_entry(fs.flow.src, p.dst, at, e);
            if (entry) {
                pin_route(p, entry->alt, at);
                forward(p, at);
                return;
            }
        }
        // Link-state behavior at a detected failure.
        if (cfg.ls_failure_behavior == LsFailureBehavior::BounceToPrevious &&
            p.prev_node != kNoNode) {
            int back = t.edge_index(at, p.prev_node);
            if (back >= 0 && links[static_cast<size_t>(back)].up) {
                transmit(p, at, p.prev_node);
                return;
            }
        }
        drop(p, DropReason::LinkDown, at);
    }

    // ---- events -----------------------------------------------------------

    void handle_generate(const Event& ev) {
        int flow_idx = ev.a;
        FlowState& fs = flows[static_cast<size_t>(flow_idx)];
        Packet p;
        p.id = packets.size();
        p.flow = flow_idx;
        p.src = fs.flow.src;
        p.dst = fs.flow.dst;
        p.created_at = now;
        p.ttl = cfg.ttl_init;
        rec.sent++;
        if (now >= rec.window_start && now < rec.window_end) {
            p.counted_window = true;
            rec.window_created++;
        }
        packets.push_back(p);
        logline("gen", p.id, p.src, "dst=" + t.label(p.dst));
        forward(packets.back(), p.src);

        double interval = cfg.packet_size * 8.0 / cfg.cbr_rate;
        double next = now + interval;
        if (next < cfg.duration) {
            Event g;
            g.kind = EventKind::Generate;
            g.time = next;
            g.a = flow_idx;
            push_event(g);
        }
    }

    void handle_link_change(const Event& ev) {
        int e = ev.a;
        LinkState& ls = links[static_cast<size_t>(e)];
        if (ev.b == 1) {
            ls.up = true;
            ls.detect_time = std::numeric_limits<double>::infinity();
            down_now[static_cast<size_t>(e)] = 0;
            logline("repair", 0, kNoNode, t.label(t.edge(e).u) + "-" + t.label(t.edge(e).v));
            return;
        }
        ls.up = false;
        ls.detect_time = now + cfg.detection_delay;
        down_now[static_cast<size_t>(e)] = 1;
        logline("fail", 0, kNoNode, t.label(t.edge(e).u) + "-" + t.label(t.edge(e).v));
        // Everything on the wire or waiting to get onto it is lost.
        for (int dir = 0; dir < 2; ++dir) {
            LinkDir& ld = ls.dir[dir];
            for (int idx : ld.pending_arrivals) {
                Event& ae = events[static_cast<size_t>(idx)];
                ae.cancelled = true;
                drop(packets[ae.pkt], DropReason::LinkDown, t.edge(e).u);
            }
            ld.pending_arrivals.clear();
            if (ld.busy) {
                events[static_cast<size_t>(ld.tx_event)].cancelled = true;
                drop(packets[ld.in_service], DropReason::LinkDown, t.edge(e).u);
                ld.busy = false;
                ld.tx_event = -1;
            }
            for (std::uint64_t pid : ld.queue) drop(packets[pid], DropReason::LinkDown, t.edge(e).u);
            ld.queue.clear();
        }
    }

    void handle_fib_ready(const Event& ev) {
        NodeId v = ev.a;
        int epoch = ev.b;
        if (epoch > node_epoch[static_cast<size_t>(v)]) {
            node_epoch[static_cast<size_t>(v)] = epoch;
            logline("fibready", 0, v, "epoch=" + std::to_string(epoch));
        }
    }

    // ---- run --------------------------------------------------------------

    MetricsRecord execute() {
        const int n = t.node_count();
        rec.node_forwarding.assign(static_cast<size_t>(n), 0);
        rec.throughput_bins.assign(static_cast<size_t>(std::ceil(cfg.duration)), 0.0);
        links.assign(static_cast<size_t>(t.edge_count()), LinkState{});

        build_epochs();
        setup_flows();

        // Measurement window for failure-period statistics.
        if (!sched.empty()) {
            rec.window_start = sched.front().fail_time;
            double end = rec.window_start;
            for (const auto& ep : epochs)
                if (!ep.timeline.node.empty()) end = std::max(end, ep.timeline.max_fib_ready());
            rec.window_end = std::min(end, cfg.duration);
        }

        for (int i = 0; i < static_cast<int>(flows.size()); ++i) {
            Event g;
            g.kind = EventKind::Generate;
            g.time = cfg.cbr_start;
            g.a = i;
            push_event(g);
        }

        while (!pq.empty()) {
            auto [time, s] = pq.top();
            pq.pop();
            const Event ev = events[static_cast<size_t>(s)];
            if (ev.cancelled) continue;
            if (time > cfg.duration) break;
            now = time;
            switch (ev.kind) {
                case EventKind::Generate: handle_generate(ev); break;
                case EventKind::TxDone: handle_txdone(ev); break;
                case EventKind::Arrival: handle_arrival(ev, static_cast<int>(s)); break;
                case EventKind::LinkChange: handle_link_change(ev); break;
                case EventKind::FibReady: handle_fib_ready(ev); break;
            }
        }

        rec.in_flight_at_end = rec.sent - rec.delivered - rec.drops_total();

        // Path-length measurements.
        double prim = 0, backup = 0, newprim = 0;
        int prim_n = 0, backup_n = 0, newprim_n = 0;
        std::vector<int> final_down;
        for (int e = 0; e < t.edge_count(); ++e)
            if (down_now[static_cast<size_t>(e)]) final_down.push_back(e);
        const RoutingTable& final_table = epochs.back().table;
        for (const auto& fs : flows) {
            if (fs.primary.empty()) continue;
            prim += fs.primary.hops();
            prim_n++;
            if (final_table.reachable(fs.flow.src, fs.flow.dst) && !final_down.empty()) {
                newprim += primary_path(final_table, fs.flow.src, fs.flow.dst).hops();
                newprim_n++;
            }
            if (cfg.mode == ForwardingMode::ARTFP && fs.artfp) {
                backup += fs.artfp->alt.hops();
                backup_n++;
            } else if (cfg.mode == ForwardingMode::ARTCP && bt && !sched.empty()) {
                // Recovery path for the first failure: primary prefix up to
                // the incident node plus its local alternative.
                int edge = sched.front().edge;
                for (size_t i = 0; i + 1 < fs.primary.nodes.size(); ++i) {
                    if (t.edge_index(fs.primary.nodes[i], fs.primary.nodes[i + 1]) != edge)
                        continue;
                    const BackupEntry* entry =
                        bt->artcp_entry(fs.flow.src, fs.flow.dst, fs.primary.nodes[i], edge);
                    if (entry) {
                        backup += static_cast<double>(i) + entry->alt.hops();
                        backup_n++;
                    }
                    break;
                }
            }
        }
        rec.avg_primary_len = prim_n ? prim / prim_n : 0.0;
        rec.avg_backup_len = backup_n ? backup / backup_n : 0.0;
        rec.avg_new_primary_len = newprim_n ? newprim / newprim_n : 0.0;

        if (cfg.check_invariants) {
            std::uint64_t alive = 0;
            for (const auto& p : packets)
                if (p.alive) ++alive;
            if (alive != rec.in_flight_at_end)
                throw std::logic_error("packet conservation bookkeeping is broken");
        }
        return rec;
    }
};

}  // namespace

MetricsRecord run(const Topology& t, const RoutingTable& tr, const BackupTable* bt,
                  const std::vector<FailureEvent>& sched, const SimConfig& cfg,
                  std::ostream* event_log) {
    cfg.validate();
    if ((cfg.mode != ForwardingMode::LS) != (bt != nullptr))
        throw std::invalid_argument("backup table must be present exactly for ART modes");
    if (bt && bt->mode != cfg.mode)
        throw std::invalid_argument("backup table mode does not match the simulation mode");
    for (const Flow& f : cfg.flows)
        if (f.src < 0 || f.dst < 0 || f.src >= t.node_count() || f.dst >= t.node_count() ||
            f.src == f.dst)
            throw std::invalid_argument("invalid flow");
    for (const auto& ev : sched) {
        if (ev.edge < 0 || ev.edge >= t.edge_count())
            throw std::invalid_argument("failure references an unknown edge");
        if (ev.fail_time <= 0 || ev.fail_time >= cfg.duration)
            throw std::invalid_argument("failure time outside the simulation");
    }
    Sim sim(t, tr, bt, sched, cfg, event_log);
    return sim.execute();
}

}  // namespace artsim
