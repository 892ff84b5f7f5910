#pragma once

#include <cstdint>
#include <set>
#include <string>

#include "artsim/art_backup.hpp"
#include "artsim/oracle.hpp"

namespace artsim {

bool path_is_simple(const Path& p);

/// Pairwise (u,v) edge keys of a path, canonical u < v.
std::set<std::pair<NodeId, NodeId>> path_edge_keys(const Path& p);

/// Cross-validation of the searches against exhaustive enumeration on a
/// seeded corpus of random connected graphs. Each graph is checked for every
/// ordered reachable pair: full-path search presence/absence must match the
/// oracle under the same disjointness predicate, every found path must
/// satisfy the predicate, and the local search is checked against the oracle
/// under a random edge avoid-set.
struct OracleCheckReport {
    int graphs = 0;
    std::int64_t pairs_checked = 0;
    std::int64_t artfp_mismatches = 0;
    std::int64_t artcp_mismatches = 0;
    std::int64_t predicate_violations = 0;

    bool clean() const {
        return artfp_mismatches == 0 && artcp_mismatches == 0 && predicate_violations == 0;
    }
    std::string to_text() const;
};

OracleCheckReport oracle_check(int graphs, int n_min, int n_max, std::uint64_t seed,
                               Disjointness disjointness = Disjointness::InteriorNode);

}  // namespace artsim
