#include "placeran/pathgen.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

namespace placeran {

namespace {

constexpr double kLatencyTie = 1e-12;

int hierarchy_level(const Node& n) {
    switch (n.kind) {
        case NodeKind::Core: return 0;
        case NodeKind::Transport:
            switch (*n.transport_class) {
                case TransportClass::AG1: return 1;
                case TransportClass::AG2: return 2;
                case TransportClass::AC1: return 3;
                case TransportClass::AC2: return 4;
            }
            return 4;
        case NodeKind::RadioUnit: return 5;
        case NodeKind::ComputingResource: return 6;
    }
    return 6;
}

struct Edge {
    int to;
    int link;
    double weight;
};

// Routing graph over core + transport nodes + the one target RU.  CR nodes
// and other RUs are leaves and never transit.
struct RoutingGraph {
    const Topology& topo;
    int source = -1;
    int target = -1;
    std::vector<std::vector<Edge>> adj;

    RoutingGraph(const Topology& t, const NodeId& ru, PathMetric metric) : topo(t) {
        const bool level_rule = t.hierarchical();
        int n = static_cast<int>(t.nodes().size());
        adj.assign(n, {});
        target = t.node_index(ru);
        const NodeId* core = t.core();
        source = core ? t.node_index(*core) : -1;
        if (source < 0 || target < 0) return;

        auto routable = [&](int idx) {
            const Node& node = t.nodes()[idx];
            if (idx == target) return true;
            return node.kind == NodeKind::Core || node.kind == NodeKind::Transport;
        };
        for (int li = 0; li < static_cast<int>(t.links().size()); ++li) {
            const Link& l = t.links()[li];
            int ia = t.node_index(l.a);
            int ib = t.node_index(l.b);
            if (ia < 0 || ib < 0 || !routable(ia) || !routable(ib)) continue;
            double w = metric == PathMetric::Latency ? l.latency_s : 1.0;
            if (level_rule) {
                int la = hierarchy_level(t.nodes()[ia]);
                int lb = hierarchy_level(t.nodes()[ib]);
                if (la == lb) continue;  // lateral moves would repeat a level
                if (la < lb)
                    adj[ia].push_back({ib, li, w});
                else
                    adj[ib].push_back({ia, li, w});
            } else {
                adj[ia].push_back({ib, li, w});
                adj[ib].push_back({ia, li, w});
            }
        }
    }
};

struct Path {
    std::vector<int> nodes;  // node indices
    std::vector<int> links;  // link indices
    double cost = 0.0;
};

bool path_node_lex_less(const Topology& t, const std::vector<int>& a, const std::vector<int>& b) {
    size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
        const NodeId& x = t.nodes()[a[i]].id;
        const NodeId& y = t.nodes()[b[i]].id;
        if (x != y) return x < y;
    }
    return a.size() < b.size();
}

bool path_less(const Topology& t, const Path& a, const Path& b) {
    if (a.cost < b.cost - kLatencyTie) return true;
    if (b.cost < a.cost - kLatencyTie) return false;
    return path_node_lex_less(t, a.nodes, b.nodes);
}

// Dijkstra yielding the lexicographically smallest among minimum-cost
// paths; banned nodes/links model Yen's spur restrictions.
std::optional<Path> shortest_path(const RoutingGraph& g, int from,
                                  const std::vector<char>& banned_node,
                                  const std::set<int>& banned_links) {
    const Topology& t = g.topo;
    int n = static_cast<int>(g.adj.size());
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<Path> best(n);
    std::vector<char> done(n, 0);

    auto cmp = [&](int a, int b) {
        if (dist[a] != dist[b]) return dist[a] > dist[b];
        return t.nodes()[a].id > t.nodes()[b].id;
    };
    std::priority_queue<int, std::vector<int>, decltype(cmp)> pq(cmp);

    dist[from] = 0.0;
    best[from].nodes = {from};
    pq.push(from);
    while (!pq.empty()) {
        int u = pq.top();
        pq.pop();
        if (done[u]) continue;
        done[u] = 1;
        if (u == g.target) break;
        for (const Edge& e : g.adj[u]) {
            if (banned_node[e.to] || banned_links.count(e.link)) continue;
            if (done[e.to]) continue;
            double nd = dist[u] + e.weight;
            Path cand = best[u];
            cand.nodes.push_back(e.to);
            cand.links.push_back(e.link);
            cand.cost = nd;
            bool improve = nd < dist[e.to] - kLatencyTie;
            bool tie = !improve && nd < dist[e.to] + kLatencyTie &&
                       path_node_lex_less(t, cand.nodes, best[e.to].nodes);
            if (improve || tie) {
                dist[e.to] = nd;
                best[e.to] = std::move(cand);
                pq.push(e.to);
            }
        }
    }
    if (!done[g.target] && !std::isfinite(dist[g.target])) return std::nullopt;
    if (best[g.target].nodes.empty()) return std::nullopt;
    return best[g.target];
}

Route to_route(const Topology& t, const NodeId& ru, const Path& p) {
    Route r;
    r.ru = ru;
    for (int ni : p.nodes) r.nodes.push_back(t.nodes()[ni].id);
    double lat = 0.0;
    for (int li : p.links) {
        r.links.push_back(t.links()[li].id);
        lat += t.links()[li].latency_s;
    }
    r.total_latency = lat;
    return r;
}

}  // namespace

std::vector<Route> k_shortest_routes(const Topology& topology, const NodeId& ru, int k,
                                     PathMetric metric) {
    std::vector<Route> out;
    if (k < 1) return out;
    RoutingGraph graph(topology, ru, metric);
    if (graph.source < 0 || graph.target < 0) return out;

    int n = static_cast<int>(graph.adj.size());
    std::vector<char> no_ban(n, 0);
    auto first = shortest_path(graph, graph.source, no_ban, {});
    if (!first) return out;

    std::vector<Path> accepted = {*first};
    auto order = [&](const Path& a, const Path& b) { return path_less(topology, a, b); };
    std::vector<Path> frontier;  // Yen's candidate set B, kept sorted

    while (static_cast<int>(accepted.size()) < k) {
        const Path& prev = accepted.back();
        for (size_t spur = 0; spur + 1 < prev.nodes.size(); ++spur) {
            std::vector<int> root_nodes(prev.nodes.begin(), prev.nodes.begin() + spur + 1);
            std::vector<int> root_links(prev.links.begin(), prev.links.begin() + spur);

            std::set<int> banned_links;
            for (const Path& a : accepted) {
                if (a.nodes.size() > spur &&
                    std::equal(root_nodes.begin(), root_nodes.end(), a.nodes.begin()))
                    if (a.links.size() > spur) banned_links.insert(a.links[spur]);
            }
            std::vector<char> banned_node(n, 0);
            for (size_t i = 0; i < spur; ++i) banned_node[prev.nodes[i]] = 1;

            auto spur_path = shortest_path(graph, prev.nodes[spur], banned_node, banned_links);
            if (!spur_path) continue;

            Path total;
            total.nodes = root_nodes;
            total.nodes.insert(total.nodes.end(), spur_path->nodes.begin() + 1,
                               spur_path->nodes.end());
            total.links = root_links;
            total.links.insert(total.links.end(), spur_path->links.begin(), spur_path->links.end());
            total.cost = spur_path->cost;
            for (int li : root_links)
                total.cost += metric == PathMetric::Latency ? topology.links()[li].latency_s : 1.0;

            bool dup = false;
            for (const Path& a : accepted)
                if (a.nodes == total.nodes) dup = true;
            for (const Path& f : frontier)
                if (f.nodes == total.nodes) dup = true;
            if (!dup) frontier.push_back(std::move(total));
        }
        if (frontier.empty()) break;
        auto it = std::min_element(frontier.begin(), frontier.end(), order);
        accepted.push_back(*it);
        frontier.erase(it);
    }

    std::sort(accepted.begin(), accepted.end(), order);
    for (const Path& p : accepted) out.push_back(to_route(topology, ru, p));
    return out;
}

std::vector<LinkId> CandidateAssignment::backhaul_links() const {
    return {route->links.begin(), route->links.begin() + bh_end};
}
std::vector<LinkId> CandidateAssignment::midhaul_links() const {
    return {route->links.begin() + bh_end, route->links.begin() + mh_end};
}
std::vector<LinkId> CandidateAssignment::fronthaul_links() const {
    return {route->links.begin() + mh_end, route->links.end()};
}

namespace {

struct HostOption {
    NodeId cr;
    int position;  // route node index the CR is attached at
};

double segment_latency(const Topology& t, const Route& r, int from, int to) {
    double s = 0.0;
    for (int i = from; i < to; ++i) s += t.find_link(r.links[i])->latency_s;
    return s;
}

double unit_demand(const DrcCatalog& c, const std::vector<VnfId>& fs) {
    double s = 0.0;
    for (VnfId f : fs) s += c.demand(f);
    return s;
}

}  // namespace

std::vector<CandidateAssignment> enumerate_candidates(const Route& route,
                                                      const DrcCatalog& catalog,
                                                      const Topology& topology) {
    std::vector<CandidateAssignment> out;
    auto shared_route = std::make_shared<const Route>(route);
    const int n_links = static_cast<int>(route.links.size());
    const Node* ru_node = topology.find_node(route.ru);
    const std::optional<NodeId> colocated =
        ru_node && ru_node->attached_cr ? ru_node->attached_cr : std::nullopt;

    // CRs reachable from each route node; the RU's co-located CR counts as
    // sitting at the RU itself (route end), not at its transport anchor.
    std::vector<HostOption> hosts;
    for (int pos = 0; pos < static_cast<int>(route.nodes.size()); ++pos) {
        const NodeId& nid = route.nodes[pos];
        int ni = topology.node_index(nid);
        if (ni < 0) continue;
        const Node& node = topology.nodes()[ni];
        if (node.kind == NodeKind::RadioUnit) continue;  // handled below
        for (int li : topology.incident_links(ni)) {
            const Link& l = topology.links()[li];
            const NodeId& peer = l.a == nid ? l.b : l.a;
            const Node* pn = topology.find_node(peer);
            if (!pn || pn->kind != NodeKind::ComputingResource) continue;
            if (colocated && peer == *colocated) continue;  // pinned to route end
            hosts.push_back({peer, pos});
        }
    }
    if (colocated) hosts.push_back({*colocated, static_cast<int>(route.nodes.size()) - 1});
    const int end_pos = static_cast<int>(route.nodes.size()) - 1;

    for (const Drc& drc : catalog.drcs) {
        const auto colocated_fns = drc.ru_colocated_functions();
        if (!colocated_fns.empty() && !colocated) continue;  // no RU-site CR

        const double cu_demand = unit_demand(catalog, drc.cu_functions);
        const double du_demand = unit_demand(catalog, drc.du_functions);
        const double site_demand = unit_demand(catalog, colocated_fns);

        auto emit = [&](std::optional<NodeId> cu, std::optional<NodeId> du, int cu_pos,
                        int du_pos) {
            CandidateAssignment c;
            c.ru = route.ru;
            c.route = shared_route;
            c.drc_id = drc.id;
            c.cu_host = cu;
            c.du_host = du;
            // Split positions: links before the CU are backhaul, between CU
            // and DU midhaul, after the DU fronthaul.  A host at route
            // position p owns links [.., p).
            int bh_end, mh_end;
            switch (drc.set_label) {
                case DrcSetLabel::NgRan3:
                    bh_end = cu_pos;
                    mh_end = du_pos;
                    break;
                case DrcSetLabel::NgRan2:
                    bh_end = cu_pos;
                    mh_end = n_links;  // DU at the RU site
                    break;
                case DrcSetLabel::CRan:
                    bh_end = cu_pos;
                    mh_end = cu_pos;  // no midhaul
                    break;
                case DrcSetLabel::DRan:
                default:
                    bh_end = n_links;
                    mh_end = n_links;
                    break;
            }
            c.bh_end = bh_end;
            c.mh_end = mh_end;
            c.bh_latency = segment_latency(topology, route, 0, bh_end);
            c.mh_latency = segment_latency(topology, route, bh_end, mh_end);
            c.fh_latency = segment_latency(topology, route, mh_end, n_links);
            if (c.bh_latency > drc.backhaul.latency_bound_s) return;
            if (c.mh_latency > drc.midhaul.latency_bound_s) return;
            if (c.fh_latency > drc.fronthaul.latency_bound_s) return;

            auto load = [&](int from, int to, double bps) {
                if (bps <= 0) return;
                for (int i = from; i < to; ++i) c.link_loads[route.links[i]] += bps;
            };
            load(0, bh_end, drc.backhaul.bandwidth_bps);
            load(bh_end, mh_end, drc.midhaul.bandwidth_bps);
            load(mh_end, n_links, drc.fronthaul.bandwidth_bps);

            if (cu && cu_demand > 0) c.cr_loads[*cu] += cu_demand;
            if (du && du_demand > 0) c.cr_loads[*du] += du_demand;
            if (!colocated_fns.empty()) c.cr_loads[*colocated] += site_demand;
            out.push_back(std::move(c));
        };

        switch (drc.set_label) {
            case DrcSetLabel::NgRan3:
                // Distinct hosts, CU strictly before DU along the route.
                for (const HostOption& du : hosts)
                    for (const HostOption& cu : hosts)
                        if (cu.position < du.position) emit(cu.cr, du.cr, cu.position, du.position);
                break;
            case DrcSetLabel::NgRan2:
                if (!colocated) break;  // DU is pinned to the RU-site CR
                for (const HostOption& cu : hosts)
                    if (cu.position < end_pos) emit(cu.cr, *colocated, cu.position, end_pos);
                break;
            case DrcSetLabel::CRan:
                for (const HostOption& h : hosts) emit(h.cr, h.cr, h.position, h.position);
                break;
            case DrcSetLabel::DRan:
                if (colocated) emit(std::nullopt, std::nullopt, 0, 0);
                break;
        }
    }
    return out;
}

CandidatePool build_candidate_pool(const Topology& topology, const DrcCatalog& catalog, int k,
                                   PathMetric metric) {
    CandidatePool pool;
    for (const NodeId& ru : topology.radio_units()) {
        pool.rus.push_back(ru);
        std::vector<CandidateAssignment> cands;
        for (const Route& r : k_shortest_routes(topology, ru, k, metric)) {
            auto expanded = enumerate_candidates(r, catalog, topology);
            cands.insert(cands.end(), std::make_move_iterator(expanded.begin()),
                         std::make_move_iterator(expanded.end()));
        }
        pool.per_ru.push_back(std::move(cands));
    }
    return pool;
}

}  // namespace placeran
