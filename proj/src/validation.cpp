#include "artsim/validation.hpp"

#include <algorithm>
#include <sstream>

#include "artsim/rng.hpp"
#include "artsim/routing.hpp"

namespace artsim {

bool path_is_simple(const Path& p) {
    std::set<NodeId> seen(p.nodes.begin(), p.nodes.end());
    return seen.size() == p.nodes.size();
}

std::set<std::pair<NodeId, NodeId>> path_edge_keys(const Path& p) {
    std::set<std::pair<NodeId, NodeId>> keys;
    for (size_t i = 0; i + 1 < p.nodes.size(); ++i)
        keys.insert({std::min(p.nodes[i], p.nodes[i + 1]), std::max(p.nodes[i], p.nodes[i + 1])});
    return keys;
}

std::string OracleCheckReport::to_text() const {
    std::ostringstream os;
    os << "graphs=" << graphs << " pairs=" << pairs_checked
       << " artfp_mismatches=" << artfp_mismatches << " artcp_mismatches=" << artcp_mismatches
       << " predicate_violations=" << predicate_violations << " => "
       << (clean() ? "OK" : "FAILED");
    return os.str();
}

OracleCheckReport oracle_check(int graphs, int n_min, int n_max, std::uint64_t seed,
                               Disjointness disjointness) {
    OracleCheckReport rep;
    rep.graphs = graphs;
    for (int g = 0; g < graphs; ++g) {
        std::uint64_t gseed = seed + static_cast<std::uint64_t>(g);
        Rng rng(derive_seed(gseed, "oracle_params"));
        int n = n_min + static_cast<int>(rng.below(static_cast<std::uint64_t>(n_max - n_min + 1)));
        double p = rng.uniform(0.10, 0.50);
        Topology t = random_topology(n, p, derive_seed(gseed, "oracle_graph"));
        RoutingTable tr = build_routing_tables(t);

        for (NodeId s = 0; s < n; ++s)
            for (NodeId d = 0; d < n; ++d) {
                if (s == d || !tr.reachable(s, d)) continue;
                ++rep.pairs_checked;
                Path primary = primary_path(tr, s, d);
                auto primary_edges = path_edge_keys(primary);
                std::set<NodeId> interior;
                if (disjointness == Disjointness::InteriorNode)
                    for (size_t i = 1; i + 1 < primary.nodes.size(); ++i)
                        interior.insert(primary.nodes[i]);

                auto got = artfp_pair(tr, t, s, d, disjointness);
                auto want = brute_force_disjoint(t, s, d, primary_edges, interior);
                if (got.has_value() != want.has_value()) ++rep.artfp_mismatches;
                if (got) {
                    bool ok = path_is_simple(*got) && got->nodes.front() == s &&
                              got->nodes.back() == d;
                    auto keys = path_edge_keys(*got);
                    for (const auto& k : keys)
                        if (primary_edges.count(k)) ok = false;
                    if (disjointness == Disjointness::InteriorNode)
                        for (size_t i = 1; i + 1 < got->nodes.size(); ++i)
                            if (interior.count(got->nodes[i])) ok = false;
                    if (!ok) ++rep.predicate_violations;
                }

                // Local search against a random avoid-set.
                AvoidSet avoid;
                std::set<std::pair<NodeId, NodeId>> avoid_keys;
                for (int e = 0; e < t.edge_count(); ++e)
                    if (rng.unit() < 0.25) {
                        avoid.push_back(e);
                        avoid_keys.insert({t.edge(e).u, t.edge(e).v});
                    }
                auto got2 = artcp(tr, t, s, d, avoid);
                auto want2 = brute_force_disjoint(t, s, d, avoid_keys, {});
                if (got2.has_value() != want2.has_value()) ++rep.artcp_mismatches;
                if (got2) {
                    bool ok = path_is_simple(*got2) && got2->nodes.front() == s &&
                              got2->nodes.back() == d;
                    for (const auto& k : path_edge_keys(*got2))
                        if (avoid_keys.count(k)) ok = false;
                    if (!ok) ++rep.predicate_violations;
                }
            }
    }
    return rep;
}

}  // namespace artsim
