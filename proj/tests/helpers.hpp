// Shared fixture builders for the unit tests: small hand-sized topologies
// with known optimal placements, plus a seeded generator of random tiny
// instances for oracle-equivalence checks.

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "placeran/domain.hpp"
#include "placeran/json_io.hpp"
#include "placeran/pathgen.hpp"
#include "placeran/program.hpp"

namespace placeran::testfix {

inline Node core_node(const std::string& id = "core") {
    Node n;
    n.id = id;
    n.kind = NodeKind::Core;
    return n;
}

inline Node transport_node(const std::string& id, TransportClass cls = TransportClass::AC1) {
    Node n;
    n.id = id;
    n.kind = NodeKind::Transport;
    n.transport_class = cls;
    return n;
}

inline Node cr_node(const std::string& id, double capacity) {
    Node n;
    n.id = id;
    n.kind = NodeKind::ComputingResource;
    n.proc_capacity = capacity;
    return n;
}

inline Node ru_node(const std::string& id, std::optional<NodeId> attached_cr = std::nullopt) {
    Node n;
    n.id = id;
    n.kind = NodeKind::RadioUnit;
    n.attached_cr = attached_cr;
    return n;
}

inline Link make_link(const std::string& a, const std::string& b, double cap_bps = 100e9,
                 double lat_s = 1e-5) {
    Link l;
    l.id = a + "--" + b;
    l.a = a;
    l.b = b;
    l.capacity_bps = cap_bps;
    l.latency_s = lat_s;
    return l;
}

// core -- t -- ru with one CR hanging off t.  The minimal valid topology.
inline Topology chain_topology(double cr_cap = 32.0) {
    std::vector<Node> nodes = {core_node(), transport_node("t"), cr_node("c", cr_cap),
                               ru_node("ru")};
    std::vector<Link> links = {make_link("core", "t"), make_link("t", "c"), make_link("t", "ru")};
    return Topology(std::move(nodes), std::move(links), {});
}

// core -- t -- ru where the only CR sits at the RU site.
inline Topology ru_site_topology(double cr_cap = 16.0) {
    std::vector<Node> nodes = {core_node(), transport_node("t"), ru_node("ru", NodeId("c_ru")),
                               cr_node("c_ru", cr_cap)};
    std::vector<Link> links = {make_link("core", "t"), make_link("t", "ru"), make_link("ru", "c_ru")};
    return Topology(std::move(nodes), std::move(links), {});
}

// Two RUs on one transport node sharing a single CR; no RU-site CRs, so
// only the combinations hosting every virtualized function on that CR are
// admissible.
inline Topology two_ru_shared_cr(double cr_cap = 32.0, double link_cap = 100e9) {
    std::vector<Node> nodes = {core_node(), transport_node("t"), cr_node("c", cr_cap),
                               ru_node("ru1"), ru_node("ru2")};
    std::vector<Link> links = {make_link("core", "t", link_cap), make_link("t", "c", link_cap),
                               make_link("t", "ru1", link_cap), make_link("t", "ru2", link_cap)};
    return Topology(std::move(nodes), std::move(links), {});
}

// Each RU runs from its own site CR only: the all-local fixture.
inline Topology all_local_topology(int ru_count, double cr_cap = 16.0) {
    std::vector<Node> nodes = {core_node(), transport_node("t")};
    std::vector<Link> links = {make_link("core", "t")};
    for (int i = 1; i <= ru_count; ++i) {
        std::string ru = "ru" + std::to_string(i);
        std::string cr = "c_" + ru;
        nodes.push_back(ru_node(ru, NodeId(cr)));
        nodes.push_back(cr_node(cr, cr_cap));
        links.push_back(make_link("t", ru));
        links.push_back(make_link(ru, cr));
    }
    return Topology(std::move(nodes), std::move(links), {});
}

// core -- a -- ru and core -- b -- ru, with per-arm latency and capacity.
inline Topology diamond_topology(double lat_a, double lat_b, double cap_a = 100e9,
                                 double cap_b = 100e9, double cr_cap = 16.0) {
    std::vector<Node> nodes = {core_node(), transport_node("a"), transport_node("b"),
                               ru_node("ru", NodeId("c_ru")), cr_node("c_ru", cr_cap)};
    std::vector<Link> links = {make_link("core", "a", cap_a, lat_a), make_link("a", "ru", cap_a, lat_a),
                               make_link("core", "b", cap_b, lat_b), make_link("b", "ru", cap_b, lat_b),
                               make_link("ru", "c_ru")};
    return Topology(std::move(nodes), std::move(links), {});
}

// core -- t1 -- t2 -- ru with CRs on t1 and t2 plus an RU-site CR: three
// CRs along the single route.
inline Topology three_cr_route(double cr_cap = 32.0) {
    std::vector<Node> nodes = {core_node(),       transport_node("t1"), transport_node("t2"),
                               cr_node("c1", cr_cap), cr_node("c2", cr_cap),
                               ru_node("ru", NodeId("c_ru")), cr_node("c_ru", cr_cap)};
    std::vector<Link> links = {make_link("core", "t1"), make_link("t1", "c1"), make_link("t1", "t2"),
                               make_link("t2", "c2"),   make_link("t2", "ru"), make_link("ru", "c_ru")};
    return Topology(std::move(nodes), std::move(links), {});
}

// Two RUs behind a shared chain core -- tA(c_a) -- tB(c_b) -- t1 with
// RU-site CRs.  Capacities sized so the best first-stage value admits
// several optimal placements whose DRC sets differ: the CU slice always
// shares c_a while the DU slice lands on c_b for at most one RU, the other
// falling back to its site CR.
inline Topology stage2_tie_topology() {
    std::vector<Node> nodes = {core_node(),
                               transport_node("tA"),
                               transport_node("tB"),
                               transport_node("t1"),
                               cr_node("c_a", 4.0),
                               cr_node("c_b", 6.0),
                               ru_node("ru1", NodeId("cr1")),
                               ru_node("ru2", NodeId("cr2")),
                               cr_node("cr1", 6.0),
                               cr_node("cr2", 6.0)};
    std::vector<Link> links = {make_link("core", "tA"), make_link("tA", "c_a"), make_link("tA", "tB"),
                               make_link("tB", "c_b"),  make_link("tB", "t1"),  make_link("t1", "ru1"),
                               make_link("t1", "ru2"),  make_link("ru1", "cr1"), make_link("ru2", "cr2")};
    return Topology(std::move(nodes), std::move(links), {});
}

// Same chain without RU-site CRs and with c_b able to carry both DU
// slices: the unique best split shares the CU slice on c_a and the DU
// slice on c_b, reachable with two different (equal-sized) splits whose
// priorities differ.  The third stage must break that tie.
inline Topology stage3_tie_topology() {
    std::vector<Node> nodes = {core_node(),       transport_node("tA"), transport_node("tB"),
                               transport_node("t1"), cr_node("c_a", 4.0), cr_node("c_b", 14.0),
                               ru_node("ru1"),     ru_node("ru2")};
    std::vector<Link> links = {make_link("core", "tA"), make_link("tA", "c_a"), make_link("tA", "tB"),
                               make_link("tB", "c_b"),  make_link("tB", "t1"),  make_link("t1", "ru1"),
                               make_link("t1", "ru2")};
    return Topology(std::move(nodes), std::move(links), {});
}

// Seeded random tiny instance: a diamond head feeding a short chain, CRs
// and RUs sprinkled with seed-dependent capacities.  Intended for
// exhaustive cross-checks, so candidate counts stay small.
inline Topology random_tiny_topology(std::uint64_t seed) {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 0xabcdef12345ULL);
    auto coin = [&](double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; };
    auto uni = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };

    std::vector<Node> nodes = {core_node(), transport_node("t1"), transport_node("t2"),
                               transport_node("t3"), transport_node("t4")};
    std::vector<Link> links;
    auto rlink = [&](const std::string& a, const std::string& b) {
        links.push_back(make_link(a, b, uni(6e9, 40e9), uni(1e-5, 8e-5)));
    };
    rlink("core", "t1");
    rlink("core", "t2");
    rlink("t1", "t3");
    rlink("t2", "t3");
    rlink("t3", "t4");

    int crs = 0;
    for (const std::string& t : {"t1", "t2", "t3", "t4"}) {
        if (crs < 4 && coin(0.6)) {
            std::string cr = "c_" + t;
            nodes.push_back(cr_node(cr, uni(6.0, 20.0)));
            links.push_back(make_link(t, cr));
            ++crs;
        }
    }
    std::uniform_int_distribution<int> ru_count_dist(1, 4);
    int ru_count = ru_count_dist(rng);
    const std::string sites[] = {"t1", "t2", "t3", "t4"};
    for (int i = 0; i < ru_count; ++i) {
        std::string site = sites[std::uniform_int_distribution<int>(0, 3)(rng)];
        std::string ru = "ru" + std::to_string(i + 1);
        if (crs < 6 && coin(0.5)) {
            std::string cr = "c_" + ru;
            nodes.push_back(ru_node(ru, NodeId(cr)));
            nodes.push_back(cr_node(cr, uni(4.0, 16.0)));
            links.push_back(make_link(site, ru, uni(6e9, 40e9), uni(1e-5, 8e-5)));
            links.push_back(make_link(ru, cr));
            ++crs;
        } else {
            nodes.push_back(ru_node(ru));
            links.push_back(make_link(site, ru, uni(6e9, 40e9), uni(1e-5, 8e-5)));
        }
    }
    return Topology(std::move(nodes), std::move(links), {});
}

// Candidate-combination count of a compiled instance, for oracle guards.
inline double combination_count(const CompiledInstance& inst) {
    double prod = 1.0;
    for (const auto& list : inst.candidates) prod *= static_cast<double>(list.size());
    return prod;
}

}  // namespace placeran::testfix
