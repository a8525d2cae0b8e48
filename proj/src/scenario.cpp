#include "placeran/scenario.hpp"

#include <algorithm>
#include <stdexcept>

#include "placeran/rng.hpp"

namespace placeran {

const char* to_string(TopologyKind k) { return k == TopologyKind::T1 ? "T1" : "T2"; }

const char* to_string(CapacityScenario c) {
    switch (c) {
        case CapacityScenario::LC: return "LC";
        case CapacityScenario::RC: return "RC";
        case CapacityScenario::HC: return "HC";
    }
    return "?";
}

const char* to_string(RuConfig r) { return r == RuConfig::F1 ? "F1" : "R1"; }

std::optional<TopologyKind> topology_kind_from_string(const std::string& s) {
    if (s == "T1") return TopologyKind::T1;
    if (s == "T2") return TopologyKind::T2;
    return std::nullopt;
}

std::optional<CapacityScenario> capacity_scenario_from_string(const std::string& s) {
    if (s == "LC") return CapacityScenario::LC;
    if (s == "RC") return CapacityScenario::RC;
    if (s == "HC") return CapacityScenario::HC;
    return std::nullopt;
}

std::optional<RuConfig> ru_config_from_string(const std::string& s) {
    if (s == "F1") return RuConfig::F1;
    if (s == "R1") return RuConfig::R1;
    return std::nullopt;
}

// Capacity tables are sized so that the low end still lets a hub CR host the
// DU load of its whole access subtree (T1: 9 RUs x 5 cores per ring hub,
// T2: 21 RUs x 5 cores per AG2 subtree) and an access link carry the
// fronthaul streams converging on that hub.  Scarcity at the low end comes
// from the AG1 tier instead, which forces the CU layer to fragment across
// several CRs; the high end centralizes it on one.
ParamsTable default_params(TopologyKind kind) {
    ParamsTable p;
    if (kind == TopologyKind::T1) {
        p.classes[TransportClass::AG1] = {2, 64.0, 128.0};
        p.classes[TransportClass::AG2] = {1, 48.0, 64.0};
        p.classes[TransportClass::AC1] = {1, 8.0, 16.0};
        p.aggregation_link = {40e9, 400e9, 48.0};
        p.access_link = {32e9, 40e9, 8.0};
        // T1 link distances are known, so latency does not vary with the
        // capacity scenario.
        p.distance_mult_lc = p.distance_mult_rc = p.distance_mult_hc = 1.0;
    } else {
        p.classes[TransportClass::AG1] = {2, 128.0, 256.0};
        p.classes[TransportClass::AG2] = {1, 112.0, 128.0};
        p.classes[TransportClass::AC1] = {1, 8.0, 32.0};
        p.classes[TransportClass::AC2] = {1, 8.0, 16.0};
        p.aggregation_link = {100e9, 1000e9, 42.0};
        p.access_link = {40e9, 100e9, 6.0};
        p.core_link_distance_km = 10.0;
    }
    return p;
}

Json params_to_json(const ParamsTable& p) {
    Json j;
    j["classes"] = Json::object();
    for (const auto& [tc, cp] : p.classes) {
        Json cj;
        cj["cr_count"] = cp.cr_count;
        cj["cr_cap_lc"] = cp.cr_cap_lc;
        cj["cr_cap_hc"] = cp.cr_cap_hc;
        j["classes"][to_string(tc)] = std::move(cj);
    }
    auto tier = [](const TierParams& t) {
        Json tj;
        tj["bw_lc"] = t.bw_lc;
        tj["bw_hc"] = t.bw_hc;
        tj["distance_km"] = t.distance_km;
        return tj;
    };
    j["aggregation_link"] = tier(p.aggregation_link);
    j["access_link"] = tier(p.access_link);
    j["core_link_distance_km"] = p.core_link_distance_km;
    j["ru_link_distance_km"] = p.ru_link_distance_km;
    j["propagation_s_per_km"] = p.propagation_s_per_km;
    j["link_overhead_s"] = p.link_overhead_s;
    j["distance_mult_lc"] = p.distance_mult_lc;
    j["distance_mult_rc"] = p.distance_mult_rc;
    j["distance_mult_hc"] = p.distance_mult_hc;
    j["ru_prob"] = p.ru_prob;
    return j;
}

ParamsTable params_from_json(const Json& j, TopologyKind kind) {
    ParamsTable p = default_params(kind);
    if (j.contains("classes")) {
        for (const auto& [key, cj] : j.at("classes").items()) {
            auto tc = transport_class_from_string(key);
            if (!tc) throw ParseError("params: unknown transport class " + key);
            ClassParams cp = p.classes.count(*tc) ? p.classes[*tc] : ClassParams{};
            if (cj.contains("cr_count")) cp.cr_count = cj.at("cr_count").get<int>();
            if (cj.contains("cr_cap_lc")) cp.cr_cap_lc = cj.at("cr_cap_lc").get<double>();
            if (cj.contains("cr_cap_hc")) cp.cr_cap_hc = cj.at("cr_cap_hc").get<double>();
            p.classes[*tc] = cp;
        }
    }
    auto tier = [&](const char* key, TierParams& t) {
        if (!j.contains(key)) return;
        const Json& tj = j.at(key);
        if (tj.contains("bw_lc")) t.bw_lc = tj.at("bw_lc").get<double>();
        if (tj.contains("bw_hc")) t.bw_hc = tj.at("bw_hc").get<double>();
        if (tj.contains("distance_km")) t.distance_km = tj.at("distance_km").get<double>();
    };
    tier("aggregation_link", p.aggregation_link);
    tier("access_link", p.access_link);
    auto num = [&](const char* key, double& out) {
        if (j.contains(key)) out = j.at(key).get<double>();
    };
    num("core_link_distance_km", p.core_link_distance_km);
    num("ru_link_distance_km", p.ru_link_distance_km);
    num("propagation_s_per_km", p.propagation_s_per_km);
    num("link_overhead_s", p.link_overhead_s);
    num("distance_mult_lc", p.distance_mult_lc);
    num("distance_mult_rc", p.distance_mult_rc);
    num("distance_mult_hc", p.distance_mult_hc);
    num("ru_prob", p.ru_prob);
    return p;
}

ScenarioSpec ScenarioSpec::make(TopologyKind kind, CapacityScenario cap, RuConfig ru,
                                std::uint64_t seed) {
    ScenarioSpec s;
    s.topology_kind = kind;
    s.capacity = cap;
    s.ru_config = ru;
    s.seed = seed;
    s.params = default_params(kind);
    return s;
}

std::string validate_spec(const ScenarioSpec& spec) {
    if (spec.topology_kind == TopologyKind::T1 && spec.params.classes.count(TransportClass::AC2))
        return "T1 has no AC2 transport class";
    for (const auto& [tc, cp] : spec.params.classes) {
        if (cp.cr_count < 0) return std::string("negative cr_count for ") + to_string(tc);
        if (cp.cr_cap_lc > cp.cr_cap_hc)
            return std::string("empty capacity range for ") + to_string(tc);
        if (cp.cr_cap_lc < 0) return std::string("negative capacity for ") + to_string(tc);
    }
    for (const TierParams* t : {&spec.params.aggregation_link, &spec.params.access_link}) {
        if (!(t->bw_lc > 0) || t->bw_lc > t->bw_hc) return "empty link bandwidth range";
    }
    if (spec.params.ru_prob < 0 || spec.params.ru_prob > 1) return "ru_prob outside [0,1]";
    return "";
}

namespace {

// Placeholder link values; apply_capacity overwrites transport links, while
// CR stub links keep an effectively unconstrained capacity (they are
// co-location stubs and carry no modeled load).
constexpr double kStubCapacity = 1e15;
constexpr double kPlaceholderCapacity = 1.0;

struct Builder {
    std::vector<Node> nodes;
    std::vector<Link> links;

    void transport(const std::string& id, TransportClass tc) {
        Node n;
        n.id = id;
        n.kind = NodeKind::Transport;
        n.transport_class = tc;
        nodes.push_back(std::move(n));
    }

    void link(const std::string& a, const std::string& b, double capacity, double latency) {
        Link l;
        l.id = a + "--" + b;
        l.a = a;
        l.b = b;
        l.capacity_bps = capacity;
        l.latency_s = latency;
        links.push_back(std::move(l));
    }

    void crs_for(const std::string& transport_id, int count) {
        for (int i = 0; i < count; ++i) {
            Node n;
            n.id = "cr_" + transport_id + "_" + std::to_string(i);
            n.kind = NodeKind::ComputingResource;
            n.proc_capacity = 0.0;
            std::string cr_id = n.id;
            nodes.push_back(std::move(n));
            link(transport_id, cr_id, kStubCapacity, 0.0);
        }
    }
};

// T1: 51 transport nodes.  An aggregation ring of 2 AG1 + 6 AG2, and one
// access ring of AC1 nodes hanging off each AG2 (sizes 8,7,7,7,7,7 = 43).
constexpr int kT1AccessRingSizes[6] = {8, 7, 7, 7, 7, 7};

Topology build_t1(const ScenarioSpec& spec) {
    Builder b;
    Node core;
    core.id = "core";
    core.kind = NodeKind::Core;
    b.nodes.push_back(core);

    const std::vector<std::pair<std::string, TransportClass>> agg_ring = {
        {"ag1_0", TransportClass::AG1}, {"ag2_0", TransportClass::AG2},
        {"ag2_1", TransportClass::AG2}, {"ag2_2", TransportClass::AG2},
        {"ag1_1", TransportClass::AG1}, {"ag2_3", TransportClass::AG2},
        {"ag2_4", TransportClass::AG2}, {"ag2_5", TransportClass::AG2},
    };
    for (const auto& [id, tc] : agg_ring) b.transport(id, tc);
    for (size_t i = 0; i < agg_ring.size(); ++i)
        b.link(agg_ring[i].first, agg_ring[(i + 1) % agg_ring.size()].first,
               kPlaceholderCapacity, 0.0);
    b.link("core", "ag1_0", kPlaceholderCapacity, 0.0);
    b.link("core", "ag1_1", kPlaceholderCapacity, 0.0);

    for (int r = 0; r < 6; ++r) {
        const std::string hub = "ag2_" + std::to_string(r);
        std::string prev = hub;
        for (int i = 0; i < kT1AccessRingSizes[r]; ++i) {
            const std::string id = "ac1_" + std::to_string(r) + "_" + std::to_string(i);
            b.transport(id, TransportClass::AC1);
            b.link(prev, id, kPlaceholderCapacity, 0.0);
            prev = id;
        }
        b.link(prev, hub, kPlaceholderCapacity, 0.0);  // close the access ring
    }

    for (const Node& n : std::vector<Node>(b.nodes))
        if (n.kind == NodeKind::Transport) {
            auto it = spec.params.classes.find(*n.transport_class);
            if (it != spec.params.classes.end()) b.crs_for(n.id, it->second.cr_count);
        }

    Metadata meta;
    meta["topology"] = "T1";
    meta["capacity"] = to_string(spec.capacity);
    meta["ru_config"] = to_string(spec.ru_config);
    meta["seed"] = std::to_string(spec.seed);
    return Topology(std::move(b.nodes), std::move(b.links), std::move(meta));
}

// T2: 128 transport nodes in a level-structured hierarchy (2 AG1, 6 AG2,
// 24 AC1, 96 AC2).  Every node below the core has two uplinks so several
// level-monotone paths exist per RU.
Topology build_t2(const ScenarioSpec& spec) {
    Builder b;
    Node core;
    core.id = "core";
    core.kind = NodeKind::Core;
    b.nodes.push_back(core);

    for (int i = 0; i < 2; ++i) b.transport("ag1_" + std::to_string(i), TransportClass::AG1);
    for (int i = 0; i < 6; ++i) b.transport("ag2_" + std::to_string(i), TransportClass::AG2);
    for (int i = 0; i < 24; ++i) b.transport("ac1_" + std::to_string(i), TransportClass::AC1);
    for (int i = 0; i < 96; ++i) b.transport("ac2_" + std::to_string(i), TransportClass::AC2);

    for (int i = 0; i < 2; ++i) b.link("core", "ag1_" + std::to_string(i), kPlaceholderCapacity, 0.0);
    for (int j = 0; j < 6; ++j)
        for (int i = 0; i < 2; ++i)
            b.link("ag1_" + std::to_string(i), "ag2_" + std::to_string(j), kPlaceholderCapacity, 0.0);
    // Below the AG2 stage the hierarchy is a plain tree; route diversity
    // comes from the doubled AG1 uplinks above.
    for (int k = 0; k < 24; ++k)
        b.link("ag2_" + std::to_string(k / 4), "ac1_" + std::to_string(k), kPlaceholderCapacity, 0.0);
    for (int m = 0; m < 96; ++m)
        b.link("ac1_" + std::to_string(m / 4), "ac2_" + std::to_string(m), kPlaceholderCapacity, 0.0);

    for (const Node& n : std::vector<Node>(b.nodes))
        if (n.kind == NodeKind::Transport) {
            auto it = spec.params.classes.find(*n.transport_class);
            if (it != spec.params.classes.end()) b.crs_for(n.id, it->second.cr_count);
        }

    Metadata meta;
    meta["topology"] = "T2";
    meta["capacity"] = to_string(spec.capacity);
    meta["ru_config"] = to_string(spec.ru_config);
    meta["seed"] = std::to_string(spec.seed);
    meta["hierarchical"] = "true";
    return Topology(std::move(b.nodes), std::move(b.links), std::move(meta));
}

TransportClass anchor_class(const Topology& t, const Node& cr) {
    for (int li : t.incident_links(t.node_index(cr.id))) {
        const Link& l = t.links()[li];
        const Node* peer = t.find_node(l.a == cr.id ? l.b : l.a);
        if (peer && peer->kind == NodeKind::Transport) return *peer->transport_class;
        if (peer && peer->kind == NodeKind::RadioUnit) return TransportClass::AC1;
    }
    return TransportClass::AC1;
}

bool is_cr_stub(const Topology& t, const Link& l) {
    const Node* na = t.find_node(l.a);
    const Node* nb = t.find_node(l.b);
    return (na && na->kind == NodeKind::ComputingResource) ||
           (nb && nb->kind == NodeKind::ComputingResource);
}

bool is_access_link(const Topology& t, const Link& l) {
    auto access = [&](const NodeId& id) {
        const Node* n = t.find_node(id);
        if (!n) return false;
        if (n->kind == NodeKind::RadioUnit) return true;
        return n->kind == NodeKind::Transport &&
               (*n->transport_class == TransportClass::AC1 ||
                *n->transport_class == TransportClass::AC2);
    };
    return access(l.a) || access(l.b);
}

}  // namespace

Topology generate_topology(const ScenarioSpec& spec) {
    std::string err = validate_spec(spec);
    if (!err.empty()) throw std::invalid_argument("invalid scenario spec: " + err);
    return spec.topology_kind == TopologyKind::T1 ? build_t1(spec) : build_t2(spec);
}

Topology apply_capacity(const Topology& topology, const ScenarioSpec& spec) {
    const ParamsTable& p = spec.params;
    Rng rng(spec.seed * 0x9e3779b97f4a7c15ULL + 1);

    double mult = 1.0;
    switch (spec.capacity) {
        case CapacityScenario::LC: mult = p.distance_mult_lc; break;
        case CapacityScenario::RC: mult = p.distance_mult_rc; break;
        case CapacityScenario::HC: mult = p.distance_mult_hc; break;
    }
    auto latency = [&](double distance_km) {
        return distance_km * mult * p.propagation_s_per_km + p.link_overhead_s;
    };
    auto bandwidth = [&](const TierParams& tier) {
        switch (spec.capacity) {
            case CapacityScenario::LC: return tier.bw_lc;
            case CapacityScenario::HC: return tier.bw_hc;
            case CapacityScenario::RC: return rng.uniform(tier.bw_lc, tier.bw_hc);
        }
        return tier.bw_lc;
    };

    std::vector<Node> nodes = topology.nodes();
    std::vector<Link> links = topology.links();

    // Nodes first, in file order, so the RC draw sequence is stable.
    for (Node& n : nodes) {
        if (n.kind != NodeKind::ComputingResource) continue;
        TransportClass tc = anchor_class(topology, n);
        auto it = p.classes.find(tc);
        if (it == p.classes.end()) continue;
        const ClassParams& cp = it->second;
        switch (spec.capacity) {
            case CapacityScenario::LC: n.proc_capacity = cp.cr_cap_lc; break;
            case CapacityScenario::HC: n.proc_capacity = cp.cr_cap_hc; break;
            case CapacityScenario::RC: n.proc_capacity = rng.uniform(cp.cr_cap_lc, cp.cr_cap_hc); break;
        }
    }

    for (Link& l : links) {
        if (is_cr_stub(topology, l)) continue;
        const Node* na = topology.find_node(l.a);
        const Node* nb = topology.find_node(l.b);
        bool core_link = (na && na->kind == NodeKind::Core) || (nb && nb->kind == NodeKind::Core);
        bool ru_link = (na && na->kind == NodeKind::RadioUnit) || (nb && nb->kind == NodeKind::RadioUnit);
        if (ru_link) {
            l.capacity_bps = bandwidth(p.access_link);
            l.latency_s = latency(p.ru_link_distance_km);
        } else if (is_access_link(topology, l)) {
            l.capacity_bps = bandwidth(p.access_link);
            l.latency_s = latency(p.access_link.distance_km);
        } else {
            l.capacity_bps = bandwidth(p.aggregation_link);
            l.latency_s = latency(core_link ? p.core_link_distance_km
                                            : p.aggregation_link.distance_km);
        }
    }

    return Topology(std::move(nodes), std::move(links), topology.metadata());
}

Topology attach_rus(const Topology& topology, const ScenarioSpec& spec) {
    const ParamsTable& p = spec.params;
    Rng rng(spec.seed * 0x9e3779b97f4a7c15ULL + 2);

    double ru_bw = 0.0;
    switch (spec.capacity) {
        case CapacityScenario::LC: ru_bw = p.access_link.bw_lc; break;
        case CapacityScenario::HC: ru_bw = p.access_link.bw_hc; break;
        case CapacityScenario::RC: ru_bw = rng.uniform(p.access_link.bw_lc, p.access_link.bw_hc); break;
    }
    double mult = 1.0;
    switch (spec.capacity) {
        case CapacityScenario::LC: mult = p.distance_mult_lc; break;
        case CapacityScenario::RC: mult = p.distance_mult_rc; break;
        case CapacityScenario::HC: mult = p.distance_mult_hc; break;
    }
    double ru_lat = p.ru_link_distance_km * mult * p.propagation_s_per_km + p.link_overhead_s;

    std::vector<Node> nodes = topology.nodes();
    std::vector<Link> links = topology.links();

    for (const Node& n : topology.nodes()) {
        if (n.kind != NodeKind::Transport) continue;
        if (*n.transport_class == TransportClass::AG1) continue;  // never hosts RUs
        if (spec.ru_config == RuConfig::R1 && !rng.bernoulli(p.ru_prob)) continue;

        Node ru;
        ru.id = "ru_" + n.id;
        ru.kind = NodeKind::RadioUnit;
        // Co-located CR: the first CR generated for this transport node.
        NodeId cr_id = "cr_" + n.id + "_0";
        if (topology.find_node(cr_id)) ru.attached_cr = cr_id;
        nodes.push_back(std::move(ru));

        Link l;
        l.id = n.id + "--ru_" + n.id;
        l.a = n.id;
        l.b = "ru_" + n.id;
        l.capacity_bps = ru_bw;
        l.latency_s = ru_lat;
        links.push_back(std::move(l));
    }

    return Topology(std::move(nodes), std::move(links), topology.metadata());
}

Topology generate_scenario(const ScenarioSpec& spec) {
    return attach_rus(apply_capacity(generate_topology(spec), spec), spec);
}

}  // namespace placeran
