#include "placeran/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace placeran {

namespace {

Json subpath_to_json(const SubpathRequirement& r, bool present) {
    if (!present) return nullptr;
    Json j;
    j["bandwidth_bps"] = r.bandwidth_bps;
    if (std::isinf(r.latency_bound_s))
        j["latency_s"] = nullptr;  // unbounded
    else
        j["latency_s"] = r.latency_bound_s;
    return j;
}

SubpathRequirement subpath_from_json(const Json& j, const std::string& where) {
    SubpathRequirement r;
    if (j.is_null()) return r;  // absent: zero demand, unbounded latency
    if (!j.is_object()) throw ParseError(where + ": sub-path must be an object or null");
    r.bandwidth_bps = j.at("bandwidth_bps").get<double>();
    if (j.contains("latency_s") && !j.at("latency_s").is_null())
        r.latency_bound_s = j.at("latency_s").get<double>();
    return r;
}

}  // namespace

Json topology_to_json(const Topology& t) {
    Json j;
    j["nodes"] = Json::array();
    for (const Node& n : t.nodes()) {
        Json nj;
        nj["id"] = n.id;
        nj["kind"] = to_string(n.kind);
        if (n.transport_class) nj["transport_class"] = to_string(*n.transport_class);
        if (n.proc_capacity) nj["proc_capacity"] = *n.proc_capacity;
        if (n.attached_cr) nj["attached_cr"] = *n.attached_cr;
        j["nodes"].push_back(std::move(nj));
    }
    j["links"] = Json::array();
    for (const Link& l : t.links()) {
        Json lj;
        lj["id"] = l.id;
        lj["a"] = l.a;
        lj["b"] = l.b;
        lj["capacity_bps"] = l.capacity_bps;
        lj["latency_s"] = l.latency_s;
        j["links"].push_back(std::move(lj));
    }
    j["metadata"] = Json::object();
    for (const auto& [k, v] : t.metadata()) j["metadata"][k] = v;
    return j;
}

Topology topology_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("topology: root must be an object");
    std::vector<Node> nodes;
    for (const Json& nj : j.at("nodes")) {
        Node n;
        n.id = nj.at("id").get<std::string>();
        auto kind = node_kind_from_string(nj.at("kind").get<std::string>());
        if (!kind) throw ParseError("topology: unknown node kind for " + n.id);
        n.kind = *kind;
        if (nj.contains("transport_class")) {
            auto tc = transport_class_from_string(nj.at("transport_class").get<std::string>());
            if (!tc) throw ParseError("topology: unknown transport class for " + n.id);
            n.transport_class = *tc;
        }
        if (nj.contains("proc_capacity")) n.proc_capacity = nj.at("proc_capacity").get<double>();
        if (nj.contains("attached_cr")) n.attached_cr = nj.at("attached_cr").get<std::string>();
        nodes.push_back(std::move(n));
    }
    std::vector<Link> links;
    for (const Json& lj : j.at("links")) {
        Link l;
        l.id = lj.at("id").get<std::string>();
        l.a = lj.at("a").get<std::string>();
        l.b = lj.at("b").get<std::string>();
        l.capacity_bps = lj.at("capacity_bps").get<double>();
        l.latency_s = lj.at("latency_s").get<double>();
        links.push_back(std::move(l));
    }
    Metadata meta;
    if (j.contains("metadata"))
        for (const auto& [k, v] : j.at("metadata").items()) meta[k] = v.get<std::string>();
    return Topology(std::move(nodes), std::move(links), std::move(meta));
}

Json catalog_to_json(const DrcCatalog& c) {
    Json j;
    j["drcs"] = Json::array();
    for (const Drc& d : c.drcs) {
        Json dj;
        dj["id"] = d.id;
        dj["set_label"] = to_string(d.set_label);
        dj["cu"] = d.cu_functions;
        dj["du"] = d.du_functions;
        dj["ru"] = d.ru_functions;
        dj["bh"] = subpath_to_json(d.backhaul, true);
        dj["mh"] = subpath_to_json(d.midhaul, d.has_midhaul());
        dj["fh"] = subpath_to_json(d.fronthaul, d.has_fronthaul());
        dj["priority"] = d.priority;
        j["drcs"].push_back(std::move(dj));
    }
    j["vnf_demands"] = Json::object();
    for (const auto& [f, g] : c.vnf_demands) j["vnf_demands"]["f" + std::to_string(f)] = g;
    return j;
}

DrcCatalog catalog_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("catalog: root must be an object");
    DrcCatalog c;
    for (const Json& dj : j.at("drcs")) {
        Drc d;
        d.id = dj.at("id").get<int>();
        if (d.id < 1 || d.id > 19)
            throw ParseError("catalog: unknown DRC id " + std::to_string(d.id));
        auto label = drc_set_label_from_string(dj.at("set_label").get<std::string>());
        if (!label) throw ParseError("catalog: unknown set_label for DRC " + std::to_string(d.id));
        d.set_label = *label;
        d.cu_functions = dj.at("cu").get<std::vector<int>>();
        d.du_functions = dj.at("du").get<std::vector<int>>();
        d.ru_functions = dj.at("ru").get<std::vector<int>>();
        std::string where = "catalog drc" + std::to_string(d.id);
        d.backhaul = subpath_from_json(dj.at("bh"), where);
        d.midhaul = subpath_from_json(dj.at("mh"), where);
        d.fronthaul = subpath_from_json(dj.at("fh"), where);
        d.priority = dj.at("priority").get<int>();
        c.drcs.push_back(std::move(d));
    }
    for (const auto& [key, v] : j.at("vnf_demands").items()) {
        if (key.size() < 2 || key[0] != 'f')
            throw ParseError("catalog: bad vnf_demands key " + key);
        int f = std::stoi(key.substr(1));
        if (f <= kFirstVnf || f > kLastVnf)
            throw ParseError("catalog: vnf_demands key outside f2..f8: " + key);
        c.vnf_demands[f] = v.get<double>();
    }
    return c;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path);
    out << content;
    if (content.empty() || content.back() != '\n') out << '\n';
    if (!out) throw ParseError("write failed for " + path);
}

Topology load_topology(const std::string& path) {
    return topology_from_json(Json::parse(read_text(path)));
}

void save_topology(const Topology& topology, const std::string& path) {
    write_text(path, topology_to_json(topology).dump(2));
}

DrcCatalog load_catalog(const std::string& path) {
    return catalog_from_json(Json::parse(read_text(path)));
}

void save_catalog(const DrcCatalog& catalog, const std::string& path) {
    write_text(path, catalog_to_json(catalog).dump(2));
}

DrcCatalog builtin_default_catalog() {
    DrcCatalog c;
    c.vnf_demands = {{2, 1.0}, {3, 1.0}, {4, 1.0}, {5, 1.0}, {6, 1.0}, {7, 1.0}, {8, 1.0}};

    auto drc = [](int id, DrcSetLabel label, std::vector<VnfId> cu, std::vector<VnfId> du,
                  std::vector<VnfId> ru, SubpathRequirement bh, SubpathRequirement mh,
                  SubpathRequirement fh, int priority) {
        Drc d;
        d.id = id;
        d.set_label = label;
        d.cu_functions = std::move(cu);
        d.du_functions = std::move(du);
        d.ru_functions = std::move(ru);
        d.backhaul = bh;
        d.midhaul = mh;
        d.fronthaul = fh;
        d.priority = priority;
        return d;
    };

    const SubpathRequirement bh{1.0e9, 10e-3};
    const SubpathRequirement mh_hi{1.02e9, 10e-3};   // RRC/PDCP boundary
    const SubpathRequirement mh_lo{1.05e9, 1.5e-3};  // PDCP/high-RLC boundary
    const SubpathRequirement fh_phy{8.0e9, 0.25e-3};   // low/high PHY boundary
    const SubpathRequirement fh_mac{3.0e9, 0.25e-3};   // PHY/MAC boundary
    const SubpathRequirement absent{};  // zero demand, unbounded latency

    using L = DrcSetLabel;
    c.drcs = {
        drc(1, L::NgRan3, {8}, {2, 3, 4, 5, 6, 7}, {1}, bh, mh_hi, fh_phy, 2),
        drc(2, L::NgRan3, {7, 8}, {2, 3, 4, 5, 6}, {1}, bh, mh_lo, fh_phy, 1),
        drc(7, L::NgRan3, {8}, {3, 4, 5, 6, 7}, {1, 2}, bh, mh_hi, fh_mac, 6),
        drc(8, L::NgRan3, {7, 8}, {3, 4, 5, 6}, {1, 2}, bh, mh_lo, fh_mac, 5),
        drc(12, L::NgRan2, {7, 8}, {2, 3, 4, 5, 6}, {1}, bh, mh_lo, absent, 7),
        drc(13, L::NgRan2, {8}, {2, 3, 4, 5, 6, 7}, {1}, bh, mh_hi, absent, 8),
        drc(17, L::CRan, {2, 3, 4, 5, 6, 7, 8}, {}, {1}, bh, absent, fh_phy, 3),
        drc(18, L::CRan, {3, 4, 5, 6, 7, 8}, {}, {1, 2}, bh, absent, fh_mac, 4),
        drc(19, L::DRan, {}, {}, {1, 2, 3, 4, 5, 6, 7, 8}, bh, absent, absent, 9),
    };
    return c;
}

}  // namespace placeran
