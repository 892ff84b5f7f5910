#include <doctest.h>

#include <limits>

#include "artsim/routing.hpp"
#include "artsim/topology.hpp"
#include "fixtures.hpp"

using namespace artsim;

namespace {

// Independent all-pairs oracle: |V|-1 rounds of full edge relaxation.
std::vector<std::int64_t> bellman_ford_dists(const Topology& t) {
    const int n = t.node_count();
    std::vector<std::int64_t> dist(static_cast<size_t>(n) * n, kInfDist);
    for (NodeId s = 0; s < n; ++s) {
        dist[static_cast<size_t>(s) * n + s] = 0;
        for (int round = 0; round < n - 1; ++round)
            for (const Edge& e : t.edges())
                for (auto [a, b] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
                    std::int64_t da = dist[static_cast<size_t>(s) * n + a];
                    if (da == kInfDist) continue;
                    std::int64_t& db = dist[static_cast<size_t>(s) * n + b];
                    if (da + e.cost < db) db = da + e.cost;
                }
    }
    return dist;
}

}  // namespace

TEST_CASE("distances match a Bellman-Ford oracle on seeded graphs") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Topology t = random_topology(10, seed % 2 ? 0.2 : 0.5, 5000 + seed);
        RoutingTable tr = build_routing_tables(t);
        auto want = bellman_ford_dists(t);
        const int n = t.node_count();
        for (NodeId s = 0; s < n; ++s)
            for (NodeId d = 0; d < n; ++d)
                REQUIRE(tr.dist(s, d) == want[static_cast<size_t>(s) * n + d]);
    }
}

TEST_CASE("four-node reference next-hop matrix is reproduced exactly") {
    Topology t = fixtures::fig1();
    RoutingTable tr = build_routing_tables(t);
    auto hop = [&](const char* s, const char* d) {
        NodeId h = tr.next_hop(fixtures::id(t, s), fixtures::id(t, d));
        return h == kNoNode ? std::string("--") : t.label(h);
    };
    // Row A: -- B C C
    CHECK(hop("A", "A") == "--");
    CHECK(hop("A", "B") == "B");
    CHECK(hop("A", "C") == "C");
    CHECK(hop("A", "D") == "C");
    // Row B: A -- C D
    CHECK(hop("B", "A") == "A");
    CHECK(hop("B", "C") == "C");
    CHECK(hop("B", "D") == "D");
    // Row C: A B -- D
    CHECK(hop("C", "A") == "A");
    CHECK(hop("C", "B") == "B");
    CHECK(hop("C", "D") == "D");
    // Row D: C B C --
    CHECK(hop("D", "A") == "C");
    CHECK(hop("D", "B") == "B");
    CHECK(hop("D", "C") == "C");
    CHECK(hop("D", "D") == "--");
}

TEST_CASE("matrix dump golden") {
    Topology t = fixtures::fig1();
    RoutingTable tr = build_routing_tables(t);
    const char* expect =
        "     A  B  C  D\n"
        "  A --  B  C  C\n"
        "  B  A --  C  D\n"
        "  C  A  B --  D\n"
        "  D  C  B  C --\n";
    CHECK(dump_next_hop_matrix(tr, t) == expect);
}

TEST_CASE("single node and disconnected pairs use sentinels") {
    Topology one = parse_topology("nodes 1\n");
    RoutingTable tr = build_routing_tables(one);
    CHECK(tr.next_hop(0, 0) == kNoNode);
    CHECK(tr.dist(0, 0) == 0);

    Topology iso = parse_topology("nodes 3\n0 1 1\n");
    RoutingTable tr2 = build_routing_tables(iso);
    CHECK(tr2.next_hop(0, 2) == kNoNode);
    CHECK_FALSE(tr2.reachable(0, 2));
    CHECK(tr2.reachable(0, 1));
}

TEST_CASE("primary paths walk the table") {
    Topology t = fixtures::fig1();
    RoutingTable tr = build_routing_tables(t);
    Path ad = primary_path(tr, fixtures::id(t, "A"), fixtures::id(t, "D"));
    CHECK(ad == fixtures::nodes_path(t, {"A", "C", "D"}));
    CHECK(ad.cost == 2);

    Path self = primary_path(tr, 0, 0);
    CHECK(self.empty());
    CHECK(self.cost == 0);
    CHECK(self.hops() == 0);

    Topology iso = parse_topology("nodes 3\n0 1 1\n");
    RoutingTable tr2 = build_routing_tables(iso);
    CHECK_THROWS_AS(primary_path(tr2, 0, 2), std::runtime_error);
}

TEST_CASE("eleven-node reconstruction keeps the published primary route") {
    Topology t = fixtures::fig2();
    RoutingTable tr = build_routing_tables(t);
    Path sd = primary_path(tr, fixtures::id(t, "S"), fixtures::id(t, "D"));
    CHECK(sd == fixtures::nodes_path(t, {"S", "1", "6", "9", "D"}));
    // Node 2's own route to D runs through node 6.
    Path two_d = primary_path(tr, fixtures::id(t, "2"), fixtures::id(t, "D"));
    bool via6 = false;
    for (NodeId v : two_d.nodes) via6 |= (v == fixtures::id(t, "6"));
    CHECK(via6);
}

TEST_CASE("table properties on seeded graphs") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Topology t = random_topology(4 + static_cast<int>(seed % 9), 0.3, 900 + seed);
        RoutingTable tr = build_routing_tables(t);
        const int n = t.node_count();
        for (NodeId s = 0; s < n; ++s)
            for (NodeId d = 0; d < n; ++d) {
                if (s == d) continue;
                REQUIRE(tr.reachable(s, d));  // generator output is connected
                // Walking next hops reaches d within n-1 steps.
                NodeId at = s;
                int steps = 0;
                while (at != d) {
                    NodeId nx = tr.next_hop(at, d);
                    REQUIRE(nx != kNoNode);
                    // Next hop is a neighbor and the distances telescope.
                    REQUIRE(t.has_edge(at, nx));
                    REQUIRE(tr.dist(at, d) ==
                            t.edge(t.edge_index(at, nx)).cost + tr.dist(nx, d));
                    at = nx;
                    REQUIRE(++steps <= n - 1);
                }
                // Subpath optimality.
                for (NodeId m = 0; m < n; ++m)
                    REQUIRE(tr.dist(s, d) <= tr.dist(s, m) + tr.dist(m, d));
            }
        // Determinism: rebuilding gives a bit-identical table.
        REQUIRE(build_routing_tables(t) == tr);
    }
}
