// Core-to-RU routing and candidate expansion.  A route is decorated with a
// DRC and concrete CU/DU host CRs to form a candidate assignment; the
// per-sub-path latency bounds act as a prefilter, so every emitted
// candidate already satisfies them.

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "placeran/domain.hpp"

namespace placeran {

enum class PathMetric { Latency, Hops };

struct Route {
    NodeId ru;
    std::vector<NodeId> nodes;  // core first, RU last
    std::vector<LinkId> links;  // nodes.size() - 1 entries
    double total_latency = 0.0;
};

// Up to k loopless routes, ordered by total latency (ties broken by the
// lexicographic node-id sequence).  Hierarchical topologies only admit
// routes whose transport levels strictly descend, so no level repeats.
// Unreachable RU -> empty list.
std::vector<Route> k_shortest_routes(const Topology& topology, const NodeId& ru, int k,
                                     PathMetric metric = PathMetric::Latency);

struct CandidateAssignment {
    NodeId ru;
    std::shared_ptr<const Route> route;
    int drc_id = 0;
    std::optional<NodeId> cu_host;  // for C-RAN both hosts name the merged CR
    std::optional<NodeId> du_host;
    // Sub-path split over route->links: [0,bh_end) backhaul,
    // [bh_end,mh_end) midhaul, [mh_end,size) fronthaul.
    int bh_end = 0;
    int mh_end = 0;
    double bh_latency = 0.0;
    double mh_latency = 0.0;
    double fh_latency = 0.0;
    std::map<LinkId, double> link_loads;  // bps on each loaded route link
    std::map<NodeId, double> cr_loads;   // reference cores per host CR

    std::vector<LinkId> backhaul_links() const;
    std::vector<LinkId> midhaul_links() const;
    std::vector<LinkId> fronthaul_links() const;
};

// All admissible (host decoration x DRC) expansions of one route.
// Candidates violating any sub-path latency bound are excluded; an RU
// without a co-located CR simply yields no candidates for DRCs that place
// functions at the RU site.
std::vector<CandidateAssignment> enumerate_candidates(const Route& route,
                                                      const DrcCatalog& catalog,
                                                      const Topology& topology);

// Routes plus candidates for every RU, RU order = topology file order.
struct CandidatePool {
    std::vector<NodeId> rus;
    std::vector<std::vector<CandidateAssignment>> per_ru;  // aligned with rus
};
CandidatePool build_candidate_pool(const Topology& topology, const DrcCatalog& catalog,
                                   int k, PathMetric metric = PathMetric::Latency);

}  // namespace placeran
