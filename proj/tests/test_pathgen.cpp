#include <algorithm>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "placeran/pathgen.hpp"
#include "placeran/scenario.hpp"

using namespace placeran;
using namespace placeran::testfix;

namespace {

DrcCatalog catalog_subset(std::initializer_list<int> ids) {
    DrcCatalog full = builtin_default_catalog();
    DrcCatalog out;
    out.vnf_demands = full.vnf_demands;
    for (int id : ids) out.drcs.push_back(*full.find(id));
    return out;
}

double sum_link_latency(const Topology& topo, const std::vector<LinkId>& links) {
    double total = 0;
    for (const LinkId& l : links) total += topo.find_link(l)->latency_s;
    return total;
}

}  // namespace

TEST_CASE("a line graph admits exactly one route") {
    Topology topo = chain_topology();
    std::vector<Route> routes = k_shortest_routes(topo, "ru", 4);
    REQUIRE(routes.size() == 1);
    CHECK(routes[0].nodes == std::vector<NodeId>{"core", "t", "ru"});
    CHECK(routes[0].links.size() == 2);
    CHECK(routes[0].total_latency == doctest::Approx(2e-5));
}

TEST_CASE("diamond routes come back latency-ascending") {
    Topology topo = diamond_topology(1.5e-3, 2.5e-3);
    std::vector<Route> routes = k_shortest_routes(topo, "ru", 2);
    REQUIRE(routes.size() == 2);
    CHECK(routes[0].total_latency == doctest::Approx(3e-3));
    CHECK(routes[1].total_latency == doctest::Approx(5e-3));
    CHECK(routes[0].nodes[1] == "a");
    CHECK(routes[1].nodes[1] == "b");
}

TEST_CASE("latency ties break on the node-id sequence") {
    Topology topo = diamond_topology(1e-3, 1e-3);
    std::vector<Route> routes = k_shortest_routes(topo, "ru", 2);
    REQUIRE(routes.size() == 2);
    CHECK(routes[0].nodes[1] == "a");
    CHECK(routes[1].nodes[1] == "b");
}

TEST_CASE("unreachable radio unit yields no routes") {
    std::vector<Node> nodes = {core_node(), transport_node("t"), cr_node("c", 8.0),
                               ru_node("ru"), transport_node("x"), ru_node("ru2")};
    std::vector<Link> links = {make_link("core", "t"), make_link("t", "c"), make_link("t", "ru"),
                               make_link("x", "ru2")};
    Topology topo(std::move(nodes), std::move(links), {});
    CHECK(k_shortest_routes(topo, "ru2", 4).empty());
}

TEST_CASE("hop metric can override the latency metric") {
    // Arm a: one fast hop chain of 3 links; arm b: 1 slow... build arms with
    // different hop counts vs latency ordering.
    std::vector<Node> nodes = {core_node(), transport_node("a1"), transport_node("a2"),
                               transport_node("b"), ru_node("ru")};
    std::vector<Link> links = {make_link("core", "a1", 100e9, 1e-6), make_link("a1", "a2", 100e9, 1e-6),
                               make_link("a2", "ru", 100e9, 1e-6), make_link("core", "b", 100e9, 1e-2),
                               make_link("b", "ru", 100e9, 1e-2)};
    Topology topo(std::move(nodes), std::move(links), {});
    std::vector<Route> by_lat = k_shortest_routes(topo, "ru", 1, PathMetric::Latency);
    std::vector<Route> by_hops = k_shortest_routes(topo, "ru", 1, PathMetric::Hops);
    REQUIRE(by_lat.size() == 1);
    REQUIRE(by_hops.size() == 1);
    CHECK(by_lat[0].nodes.size() == 4);   // the 3-hop fast arm
    CHECK(by_hops[0].nodes.size() == 3);  // the 2-hop slow arm
}

TEST_CASE("route sets are monotone in k on a generated ring") {
    Topology topo = generate_scenario(
        ScenarioSpec::make(TopologyKind::T1, CapacityScenario::HC, RuConfig::F1, 2));
    int multi = 0;
    for (const NodeId& ru : topo.radio_units()) {
        std::vector<Route> one = k_shortest_routes(topo, ru, 1);
        std::vector<Route> four = k_shortest_routes(topo, ru, 4);
        REQUIRE(!one.empty());
        CHECK(four.size() >= one.size());
        if (four.size() > 1) ++multi;
        std::set<std::vector<LinkId>> four_set;
        for (const Route& r : four) four_set.insert(r.links);
        for (const Route& r : one) CHECK(four_set.count(r.links) == 1);
        for (const Route& r : four) {
            CHECK(r.nodes.front() == *topo.core());
            CHECK(r.nodes.back() == ru);
            std::set<NodeId> uniq(r.nodes.begin(), r.nodes.end());
            CHECK(uniq.size() == r.nodes.size());  // loop-free
        }
    }
    CHECK(multi > 0);  // the ring offers alternatives for at least some RUs
}

TEST_CASE("hierarchical routes never repeat a transport level") {
    Topology topo = generate_scenario(
        ScenarioSpec::make(TopologyKind::T2, CapacityScenario::HC, RuConfig::F1, 2));
    for (const NodeId& ru : topo.radio_units()) {
        for (const Route& r : k_shortest_routes(topo, ru, 4)) {
            std::map<TransportClass, int> seen;
            for (const NodeId& id : r.nodes) {
                const Node* n = topo.find_node(id);
                if (n->kind == NodeKind::Transport) ++seen[*n->transport_class];
            }
            for (auto& [cls, count] : seen) CHECK(count <= 1);
        }
    }
}

TEST_CASE("a site-only route with the single-unit option yields one candidate") {
    Topology topo = ru_site_topology();
    DrcCatalog cat = catalog_subset({19});
    std::vector<Route> routes = k_shortest_routes(topo, "ru", 4);
    REQUIRE(routes.size() == 1);
    std::vector<CandidateAssignment> cands = enumerate_candidates(routes[0], cat, topo);
    REQUIRE(cands.size() == 1);
    CHECK(cands[0].drc_id == 19);
    CHECK(!cands[0].cu_host.has_value());
    CHECK(!cands[0].du_host.has_value());
    REQUIRE(cands[0].cr_loads.count("c_ru") == 1);
    // f2..f8 on the site CR: 7 * 1 reference cores.
    CHECK(cands[0].cr_loads.at("c_ru") == doctest::Approx(7.0));
    CHECK(cands[0].fronthaul_links().empty());
    CHECK(cands[0].midhaul_links().empty());
}

TEST_CASE("three computing resources admit three ordered host pairs") {
    Topology topo = three_cr_route();
    DrcCatalog cat = catalog_subset({1});
    std::vector<Route> routes = k_shortest_routes(topo, "ru", 1);
    REQUIRE(routes.size() == 1);
    std::vector<CandidateAssignment> cands = enumerate_candidates(routes[0], cat, topo);
    REQUIRE(cands.size() == 3);
    std::set<std::pair<NodeId, NodeId>> pairs;
    for (const CandidateAssignment& c : cands) {
        REQUIRE(c.cu_host.has_value());
        REQUIRE(c.du_host.has_value());
        pairs.insert({*c.cu_host, *c.du_host});
    }
    std::set<std::pair<NodeId, NodeId>> expect = {
        {"c1", "c2"}, {"c1", "c_ru"}, {"c2", "c_ru"}};
    CHECK(pairs == expect);
}

TEST_CASE("candidates violating a sub-path latency bound are excluded") {
    // The merged-unit option tolerates 0.25 ms between host and radio; a
    // 0.3 ms access link pushes every host over the bound.
    DrcCatalog cat = catalog_subset({17});
    auto build = [&](double access_latency) {
        std::vector<Node> nodes = {core_node(), transport_node("t"), cr_node("c", 32.0),
                                   ru_node("ru")};
        std::vector<Link> links = {make_link("core", "t", 100e9, 1e-5), make_link("t", "c"),
                                   make_link("t", "ru", 100e9, access_latency)};
        return Topology(std::move(nodes), std::move(links), {});
    };
    Topology slow = build(3e-4);
    std::vector<Route> routes = k_shortest_routes(slow, "ru", 1);
    REQUIRE(routes.size() == 1);
    CHECK(enumerate_candidates(routes[0], cat, slow).empty());

    Topology fast = build(1e-4);
    routes = k_shortest_routes(fast, "ru", 1);
    REQUIRE(routes.size() == 1);
    CHECK(enumerate_candidates(routes[0], cat, fast).size() == 1);
}

TEST_CASE("emitted candidates satisfy their bounds and structural invariants") {
    Topology topo = three_cr_route();
    DrcCatalog cat = builtin_default_catalog();
    std::vector<Route> routes = k_shortest_routes(topo, "ru", 1);
    REQUIRE(routes.size() == 1);
    const Route& route = routes[0];
    std::vector<CandidateAssignment> cands = enumerate_candidates(route, cat, topo);
    CHECK(!cands.empty());
    std::set<LinkId> route_links(route.links.begin(), route.links.end());
    for (const CandidateAssignment& c : cands) {
        CAPTURE(c.drc_id);
        const Drc* drc = cat.find(c.drc_id);

        // Sub-path concatenation covers the route in order.
        std::vector<LinkId> rebuilt = c.backhaul_links();
        for (const LinkId& l : c.midhaul_links()) rebuilt.push_back(l);
        for (const LinkId& l : c.fronthaul_links()) rebuilt.push_back(l);
        CHECK(rebuilt == route.links);

        // Recomputed segment latencies match the recorded ones and respect
        // the bounds.
        CHECK(sum_link_latency(topo, c.backhaul_links()) == doctest::Approx(c.bh_latency));
        CHECK(sum_link_latency(topo, c.midhaul_links()) == doctest::Approx(c.mh_latency));
        CHECK(sum_link_latency(topo, c.fronthaul_links()) == doctest::Approx(c.fh_latency));
        CHECK(c.bh_latency + c.mh_latency + c.fh_latency ==
              doctest::Approx(route.total_latency));
        CHECK(c.bh_latency <= drc->backhaul.latency_bound_s);
        CHECK(c.mh_latency <= drc->midhaul.latency_bound_s);
        CHECK(c.fh_latency <= drc->fronthaul.latency_bound_s);

        // Load keys stay within the route and the hosts.
        for (const auto& [link, load] : c.link_loads) {
            CHECK(route_links.count(link) == 1);
            CHECK(load > 0.0);
        }
        std::set<NodeId> hosts;
        if (c.cu_host) hosts.insert(*c.cu_host);
        if (c.du_host) hosts.insert(*c.du_host);
        hosts.insert("c_ru");  // the site CR may carry the radio-side functions
        for (const auto& [cr, load] : c.cr_loads) {
            CHECK(hosts.count(cr) == 1);
            CHECK(load > 0.0);
        }

        // Total placed compute is the whole virtualized chain.
        double total = 0;
        for (const auto& [cr, load] : c.cr_loads) total += load;
        CHECK(total == doctest::Approx(7.0));
    }
}

TEST_CASE("candidate pools are monotone in k") {
    Topology topo = generate_scenario(
        ScenarioSpec::make(TopologyKind::T1, CapacityScenario::HC, RuConfig::F1, 4));
    DrcCatalog cat = builtin_default_catalog();
    CandidatePool p1 = build_candidate_pool(topo, cat, 1);
    CandidatePool p2 = build_candidate_pool(topo, cat, 2);
    REQUIRE(p1.rus == p2.rus);
    for (size_t r = 0; r < p1.rus.size(); ++r) {
        CHECK(p2.per_ru[r].size() >= p1.per_ru[r].size());
        auto key = [](const CandidateAssignment& c) {
            return std::tuple(c.drc_id, c.route->links, c.cu_host.value_or(""),
                              c.du_host.value_or(""));
        };
        std::set<std::tuple<int, std::vector<LinkId>, NodeId, NodeId>> bigger;
        for (const CandidateAssignment& c : p2.per_ru[r]) bigger.insert(key(c));
        for (const CandidateAssignment& c : p1.per_ru[r]) CHECK(bigger.count(key(c)) == 1);
    }
}

TEST_CASE("host pairing rules follow the unit structure") {
    Topology topo = three_cr_route();
    DrcCatalog cat = builtin_default_catalog();
    std::vector<Route> routes = k_shortest_routes(topo, "ru", 1);
    std::vector<CandidateAssignment> cands = enumerate_candidates(routes[0], cat, topo);
    for (const CandidateAssignment& c : cands) {
        const Drc* drc = cat.find(c.drc_id);
        switch (drc->set_label) {
            case DrcSetLabel::NgRan3:
                REQUIRE(c.cu_host.has_value());
                REQUIRE(c.du_host.has_value());
                CHECK(*c.cu_host != *c.du_host);
                break;
            case DrcSetLabel::NgRan2:
                REQUIRE(c.cu_host.has_value());
                REQUIRE(c.du_host.has_value());
                CHECK(*c.du_host == "c_ru");  // the site CR
                break;
            case DrcSetLabel::CRan:
                REQUIRE(c.cu_host.has_value());
                REQUIRE(c.du_host.has_value());
                CHECK(*c.cu_host == *c.du_host);  // merged unit
                break;
            case DrcSetLabel::DRan:
                CHECK(!c.cu_host.has_value());
                CHECK(!c.du_host.has_value());
                break;
        }
    }
}
