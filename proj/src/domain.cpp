#include "placeran/domain.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

namespace placeran {

const char* to_string(NodeKind k) {
    switch (k) {
        case NodeKind::Core: return "core";
        case NodeKind::Transport: return "transport";
        case NodeKind::ComputingResource: return "cr";
        case NodeKind::RadioUnit: return "ru";
    }
    return "?";
}

const char* to_string(TransportClass c) {
    switch (c) {
        case TransportClass::AG1: return "AG1";
        case TransportClass::AG2: return "AG2";
        case TransportClass::AC1: return "AC1";
        case TransportClass::AC2: return "AC2";
    }
    return "?";
}

std::optional<NodeKind> node_kind_from_string(const std::string& s) {
    if (s == "core") return NodeKind::Core;
    if (s == "transport") return NodeKind::Transport;
    if (s == "cr") return NodeKind::ComputingResource;
    if (s == "ru") return NodeKind::RadioUnit;
    return std::nullopt;
}

std::optional<TransportClass> transport_class_from_string(const std::string& s) {
    if (s == "AG1") return TransportClass::AG1;
    if (s == "AG2") return TransportClass::AG2;
    if (s == "AC1") return TransportClass::AC1;
    if (s == "AC2") return TransportClass::AC2;
    return std::nullopt;
}

const char* to_string(DrcSetLabel s) {
    switch (s) {
        case DrcSetLabel::NgRan3: return "NG-RAN(3)";
        case DrcSetLabel::NgRan2: return "NG-RAN(2)";
        case DrcSetLabel::CRan: return "C-RAN";
        case DrcSetLabel::DRan: return "D-RAN";
    }
    return "?";
}

std::optional<DrcSetLabel> drc_set_label_from_string(const std::string& s) {
    if (s == "NG-RAN(3)") return DrcSetLabel::NgRan3;
    if (s == "NG-RAN(2)") return DrcSetLabel::NgRan2;
    if (s == "C-RAN") return DrcSetLabel::CRan;
    if (s == "D-RAN") return DrcSetLabel::DRan;
    return std::nullopt;
}

Topology::Topology(std::vector<Node> nodes, std::vector<Link> links, Metadata metadata)
    : nodes_(std::move(nodes)), links_(std::move(links)), metadata_(std::move(metadata)) {
    for (int i = 0; i < static_cast<int>(nodes_.size()); ++i)
        node_index_.emplace(nodes_[i].id, i);
    incident_.assign(nodes_.size(), {});
    for (int i = 0; i < static_cast<int>(links_.size()); ++i) {
        link_index_.emplace(links_[i].id, i);
        int ia = node_index(links_[i].a);
        int ib = node_index(links_[i].b);
        if (ia >= 0) incident_[ia].push_back(i);
        if (ib >= 0) incident_[ib].push_back(i);
    }
}

const Node* Topology::find_node(const NodeId& id) const {
    int i = node_index(id);
    return i < 0 ? nullptr : &nodes_[i];
}

const Link* Topology::find_link(const LinkId& id) const {
    int i = link_index(id);
    return i < 0 ? nullptr : &links_[i];
}

int Topology::node_index(const NodeId& id) const {
    auto it = node_index_.find(id);
    return it == node_index_.end() ? -1 : it->second;
}

int Topology::link_index(const LinkId& id) const {
    auto it = link_index_.find(id);
    return it == link_index_.end() ? -1 : it->second;
}

const std::vector<int>& Topology::incident_links(int node_index) const {
    return incident_[node_index];
}

const NodeId* Topology::core() const {
    const NodeId* found = nullptr;
    for (const auto& n : nodes_) {
        if (n.kind == NodeKind::Core) {
            if (found) return nullptr;
            found = &n.id;
        }
    }
    return found;
}

std::vector<NodeId> Topology::radio_units() const {
    std::vector<NodeId> out;
    for (const auto& n : nodes_)
        if (n.kind == NodeKind::RadioUnit) out.push_back(n.id);
    return out;
}

std::vector<NodeId> Topology::computing_resources() const {
    std::vector<NodeId> out;
    for (const auto& n : nodes_)
        if (n.kind == NodeKind::ComputingResource) out.push_back(n.id);
    return out;
}

bool Topology::hierarchical() const {
    auto it = metadata_.find("hierarchical");
    return it != metadata_.end() && it->second == "true";
}

ValidationReport validate_topology(const Topology& t) {
    ValidationReport report;
    auto add = [&](std::string code, std::string subject, std::string message) {
        report.push_back({std::move(code), std::move(subject), std::move(message)});
    };

    // Node-level invariants.
    int core_count = 0;
    std::set<NodeId> seen;
    for (const auto& n : t.nodes()) {
        if (!seen.insert(n.id).second) add("duplicate-node", n.id, "node id appears more than once");
        if (n.kind == NodeKind::Core) ++core_count;
        if ((n.kind == NodeKind::ComputingResource) != n.proc_capacity.has_value())
            add("proc-capacity", n.id, "proc_capacity present iff node is a computing resource");
        if (n.proc_capacity && *n.proc_capacity < 0)
            add("proc-capacity", n.id, "negative processing capacity");
        if ((n.kind == NodeKind::Transport) != n.transport_class.has_value())
            add("transport-class", n.id, "transport_class present iff node is a transport node");
        if (n.attached_cr && n.kind != NodeKind::RadioUnit)
            add("attached-cr", n.id, "attached_cr only valid on radio units");
    }
    if (core_count != 1)
        add(core_count == 0 ? "missing-core" : "multiple-cores", "",
            "topology must contain exactly one core node, found " + std::to_string(core_count));

    // Link-level invariants.
    std::set<LinkId> seen_links;
    for (const auto& l : t.links()) {
        if (!seen_links.insert(l.id).second) add("duplicate-link", l.id, "link id appears more than once");
        if (t.node_index(l.a) < 0) add("dangling-link", l.id, "unknown endpoint " + l.a);
        if (t.node_index(l.b) < 0) add("dangling-link", l.id, "unknown endpoint " + l.b);
        if (l.a == l.b) add("self-loop", l.id, "link endpoints coincide");
        if (!(l.capacity_bps > 0) || !std::isfinite(l.capacity_bps))
            add("link-capacity", l.id, "capacity must be finite and positive");
        if (l.latency_s < 0 || !std::isfinite(l.latency_s))
            add("link-latency", l.id, "latency must be finite and non-negative");
    }

    if (!report.empty()) return report;  // structure below assumes a sane index

    // Connectivity: every node reachable from the core.
    const NodeId* core = t.core();
    std::vector<char> reached(t.nodes().size(), 0);
    std::queue<int> bfs;
    int core_idx = t.node_index(*core);
    reached[core_idx] = 1;
    bfs.push(core_idx);
    while (!bfs.empty()) {
        int u = bfs.front();
        bfs.pop();
        for (int li : t.incident_links(u)) {
            const Link& l = t.links()[li];
            int v = t.node_index(l.a) == u ? t.node_index(l.b) : t.node_index(l.a);
            if (!reached[v]) {
                reached[v] = 1;
                bfs.push(v);
            }
        }
    }
    int ru_count = 0;
    for (size_t i = 0; i < t.nodes().size(); ++i) {
        const Node& n = t.nodes()[i];
        if (n.kind == NodeKind::RadioUnit) ++ru_count;
        if (!reached[i]) {
            if (n.kind == NodeKind::RadioUnit)
                add("unreachable-ru", n.id, "radio unit unreachable from the core");
            else
                add("disconnected", n.id, "node unreachable from the core");
        }
    }
    if (ru_count < 1) add("no-rus", "", "topology has no radio units");

    // CR attachment: each CR directly linked to exactly one transport node
    // or RU site.
    for (size_t i = 0; i < t.nodes().size(); ++i) {
        const Node& n = t.nodes()[i];
        if (n.kind != NodeKind::ComputingResource) continue;
        int anchors = 0;
        for (int li : t.incident_links(static_cast<int>(i))) {
            const Link& l = t.links()[li];
            const Node* peer = t.find_node(l.a == n.id ? l.b : l.a);
            if (peer && (peer->kind == NodeKind::Transport || peer->kind == NodeKind::RadioUnit)) ++anchors;
        }
        if (anchors != 1)
            add("cr-attachment", n.id,
                "computing resource must attach to exactly one transport node or RU site, found " +
                    std::to_string(anchors));
    }

    // RU attachment metadata: attached_cr must name a CR linked to the RU's
    // transport node (co-located with the attachment point).
    for (const auto& n : t.nodes()) {
        if (n.kind != NodeKind::RadioUnit || !n.attached_cr) continue;
        const Node* cr = t.find_node(*n.attached_cr);
        if (!cr || cr->kind != NodeKind::ComputingResource) {
            add("attached-cr", n.id, "attached_cr does not name a computing resource");
            continue;
        }
        bool colocated = false;
        int ru_idx = t.node_index(n.id);
        for (int li : t.incident_links(ru_idx)) {
            const Link& l = t.links()[li];
            const NodeId& peer = l.a == n.id ? l.b : l.a;
            if (peer == cr->id) colocated = true;
            const Node* pn = t.find_node(peer);
            if (pn && pn->kind == NodeKind::Transport) {
                int ti = t.node_index(peer);
                for (int lj : t.incident_links(ti)) {
                    const Link& m = t.links()[lj];
                    if (m.a == cr->id || m.b == cr->id) colocated = true;
                }
            }
        }
        if (!colocated)
            add("attached-cr", n.id, "attached_cr " + cr->id + " is not co-located with the RU attachment point");
    }

    return report;
}

int Drc::units() const {
    switch (set_label) {
        case DrcSetLabel::NgRan3: return 3;
        case DrcSetLabel::NgRan2: return 2;
        case DrcSetLabel::CRan: return 2;
        case DrcSetLabel::DRan: return 1;
    }
    return 0;
}

std::vector<VnfId> Drc::ru_colocated_functions() const {
    std::vector<VnfId> out;
    for (VnfId f : ru_functions)
        if (f != kFirstVnf) out.push_back(f);
    return out;
}

const Drc* DrcCatalog::find(int drc_id) const {
    for (const auto& d : drcs)
        if (d.id == drc_id) return &d;
    return nullptr;
}

double DrcCatalog::demand(VnfId f) const {
    auto it = vnf_demands.find(f);
    return it == vnf_demands.end() ? 0.0 : it->second;
}

int DrcCatalog::max_priority() const {
    int m = 0;
    for (const auto& d : drcs) m = std::max(m, d.priority);
    return m;
}

ValidationReport validate_catalog(const DrcCatalog& catalog) {
    ValidationReport report;
    auto add = [&](std::string code, std::string subject, std::string message) {
        report.push_back({std::move(code), std::move(subject), std::move(message)});
    };

    std::set<int> ids;
    std::set<int> priorities;
    for (const auto& d : catalog.drcs) {
        std::string sid = "drc" + std::to_string(d.id);
        if (!ids.insert(d.id).second) add("duplicate-drc", sid, "drc id repeated");
        if (d.priority <= 0) add("priority", sid, "priority must be positive");
        if (!priorities.insert(d.priority).second) add("priority", sid, "priority must be unique");

        // Stack-order partition: ru = prefix from f1 up, cu = suffix toward
        // f8, du the remainder; union is f1..f8 with no interleaving.
        std::vector<int> owner(kLastVnf + 1, 0);
        bool dup = false, range = false;
        auto mark = [&](const std::vector<VnfId>& fs, int who) {
            for (VnfId f : fs) {
                if (f < kFirstVnf || f > kLastVnf) { range = true; continue; }
                if (owner[f] != 0) dup = true;
                owner[f] = who;
            }
        };
        mark(d.ru_functions, 1);
        mark(d.du_functions, 2);
        mark(d.cu_functions, 3);
        if (range) add("vnf-range", sid, "function id outside f1..f8");
        if (dup) add("partition", sid, "cu/du/ru sets overlap");
        bool all = true;
        for (VnfId f = kFirstVnf; f <= kLastVnf; ++f)
            if (owner[f] == 0) all = false;
        if (!all) add("partition", sid, "cu/du/ru sets do not cover f1..f8");
        // No interleaving: owner sequence along f1..f8 must be non-decreasing.
        for (VnfId f = kFirstVnf; f < kLastVnf; ++f)
            if (owner[f] != 0 && owner[f + 1] != 0 && owner[f] > owner[f + 1])
                add("stack-order", sid, "unit assignment interleaves the stack order");
        if (owner[kFirstVnf] != 1) add("f1-pinned", sid, "f1 must belong to the RU site");

        // Label consistent with unit structure.
        bool cu_empty = d.cu_functions.empty();
        bool du_empty = d.du_functions.empty();
        switch (d.set_label) {
            case DrcSetLabel::NgRan3:
            case DrcSetLabel::NgRan2:
                if (cu_empty || du_empty) add("set-label", sid, "NG-RAN labels need non-empty CU and DU units");
                break;
            case DrcSetLabel::CRan:
                if (cu_empty || !du_empty) add("set-label", sid, "C-RAN carries the merged unit in cu_functions");
                break;
            case DrcSetLabel::DRan:
                if (!cu_empty || !du_empty) add("set-label", sid, "D-RAN places every function at the RU site");
                break;
        }
        // The industry set membership is fixed for the known ids.
        auto expect = [&](DrcSetLabel want) {
            if (d.set_label != want)
                add("set-label", sid, std::string("expected ") + to_string(want) + " for this id");
        };
        switch (d.id) {
            case 1: case 2: case 7: case 8: expect(DrcSetLabel::NgRan3); break;
            case 12: case 13: expect(DrcSetLabel::NgRan2); break;
            case 17: case 18: expect(DrcSetLabel::CRan); break;
            case 19: expect(DrcSetLabel::DRan); break;
            default: break;
        }

        for (const auto& [sp, req] :
             {std::pair<const char*, const SubpathRequirement*>{"bh", &d.backhaul},
              {"mh", &d.midhaul},
              {"fh", &d.fronthaul}}) {
            if (req->bandwidth_bps < 0) add("bandwidth", sid, std::string(sp) + " bandwidth negative");
            if (req->latency_bound_s < 0) add("latency", sid, std::string(sp) + " latency bound negative");
        }
    }

    for (VnfId f = kFirstVnf + 1; f <= kLastVnf; ++f)
        if (!catalog.vnf_demands.count(f))
            add("vnf-demand", "f" + std::to_string(f), "missing compute demand");
    for (const auto& [f, g] : catalog.vnf_demands)
        if (g < 0) add("vnf-demand", "f" + std::to_string(f), "negative compute demand");

    // Paper-anchored priorities: DRC2 = 1, DRC7 = 6, DRC19 carries the
    // maximum value in the catalog.
    if (const Drc* d2 = catalog.find(2); d2 && d2->priority != 1)
        add("priority-anchor", "drc2", "DRC2 must have priority 1");
    if (const Drc* d7 = catalog.find(7); d7 && d7->priority != 6)
        add("priority-anchor", "drc7", "DRC7 must have priority 6");
    if (const Drc* d19 = catalog.find(19); d19 && d19->priority != catalog.max_priority())
        add("priority-anchor", "drc19", "DRC19 must carry the maximum priority value");

    return report;
}

UnitPartition unit_partition(const Drc& drc) {
    UnitPartition p;
    p.cu = drc.cu_functions;
    p.du = drc.du_functions;
    p.ru = drc.ru_functions;
    auto order = [](std::vector<VnfId>& v) { std::sort(v.begin(), v.end()); };
    order(p.cu);
    order(p.du);
    order(p.ru);
    return p;
}

SubpathProfile subpath_profile(const Drc& drc) {
    SubpathProfile prof;
    prof.bh = drc.backhaul;
    if (drc.has_midhaul()) prof.mh = drc.midhaul;
    if (drc.has_fronthaul()) prof.fh = drc.fronthaul;
    return prof;
}

}  // namespace placeran
