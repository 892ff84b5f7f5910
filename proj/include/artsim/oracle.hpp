#pragma once

#include <optional>
#include <set>
#include <vector>

#include "artsim/routing.hpp"
#include "artsim/topology.hpp"

namespace artsim {

/// Exhaustive check, independent of the BFS search code: enumerate every
/// simple s->d path, discard those using an avoided edge or touching an
/// avoided node, and return the cheapest survivor (ties broken by
/// lexicographically smallest node sequence). Throws std::invalid_argument
/// when the instance exceeds the enumeration bound (n > 12).
std::optional<Path> brute_force_disjoint(const Topology& t, NodeId s, NodeId d,
                                         const std::set<std::pair<NodeId, NodeId>>& avoid_edges,
                                         const std::set<NodeId>& avoid_interior_nodes);

}  // namespace artsim
