#pragma once

#include <string>

#include "artsim/routing.hpp"
#include "artsim/topology.hpp"

namespace fixtures {

// Four-node reference topology: A-B, A-C, B-C, B-D, C-D, unit costs.
inline const char* kFig1 =
    "nodes A B C D\n"
    "A B 1\n"
    "A C 1\n"
    "B C 1\n"
    "B D 1\n"
    "C D 1\n";

// Eleven-node topology whose primary route S->1->6->9->D has a candidate
// backup neighbor (node 2) that routes through an on-path node, and a clean
// one (node 3).
inline const char* kFig2 =
    "nodes S 1 2 3 4 5 6 7 8 9 D\n"
    "S 1 1\n"
    "S 2 2\n"
    "S 3 1\n"
    "1 6 1\n"
    "2 6 1\n"
    "2 7 1\n"
    "3 4 1\n"
    "4 5 1\n"
    "5 D 1\n"
    "6 9 1\n"
    "7 8 1\n"
    "8 D 1\n"
    "9 D 1\n";

inline artsim::Topology fig1() { return artsim::parse_topology(kFig1); }
inline artsim::Topology fig2() { return artsim::parse_topology(kFig2); }

inline artsim::NodeId id(const artsim::Topology& t, const std::string& label) {
    artsim::NodeId v = t.find_label(label);
    if (v == artsim::kNoNode) throw std::runtime_error("no node " + label);
    return v;
}

inline artsim::Path nodes_path(const artsim::Topology& t,
                               const std::vector<std::string>& labels) {
    artsim::Path p;
    for (const auto& l : labels) p.nodes.push_back(id(t, l));
    for (size_t i = 0; i + 1 < p.nodes.size(); ++i)
        p.cost += t.edge(t.edge_index(p.nodes[i], p.nodes[i + 1])).cost;
    return p;
}

}  // namespace fixtures
