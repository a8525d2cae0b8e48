// Core data model: annotated transport topology, VNF chain semantics and
// the DRC (disaggregation option) catalog.  Everything downstream consumes
// these types read-only; all of them are plain values, safe to share across
// threads once constructed.

#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace placeran {

using NodeId = std::string;
using LinkId = std::string;

// VNFs are numbered 1..8 along the protocol stack, f1 = Low PHY (pinned to
// the radio hardware, never placed on a CR), f8 = RRC.
using VnfId = int;
inline constexpr VnfId kFirstVnf = 1;
inline constexpr VnfId kLastVnf = 8;
// The virtualizable set F' = {f2..f8}.
inline constexpr int kVirtualizableCount = 7;

enum class NodeKind { Core, Transport, ComputingResource, RadioUnit };

enum class TransportClass { AG1, AG2, AC1, AC2 };

const char* to_string(NodeKind k);
const char* to_string(TransportClass c);
std::optional<NodeKind> node_kind_from_string(const std::string& s);
std::optional<TransportClass> transport_class_from_string(const std::string& s);

struct Node {
    NodeId id;
    NodeKind kind = NodeKind::Transport;
    // Present iff kind == Transport.
    std::optional<TransportClass> transport_class;
    // Present iff kind == ComputingResource; reference-core units.
    std::optional<double> proc_capacity;
    // RadioUnit only: the CR co-located with the RU's attachment point.
    std::optional<NodeId> attached_cr;
};

struct Link {
    LinkId id;
    NodeId a;
    NodeId b;
    double capacity_bps = 0.0;
    double latency_s = 0.0;
};

// Free-form provenance carried through generated files (topology kind,
// capacity scenario, RU config, seed, ...).
using Metadata = std::map<std::string, std::string>;

class Topology {
public:
    Topology() = default;
    Topology(std::vector<Node> nodes, std::vector<Link> links, Metadata metadata);

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Link>& links() const { return links_; }
    const Metadata& metadata() const { return metadata_; }

    const Node* find_node(const NodeId& id) const;
    const Link* find_link(const LinkId& id) const;
    int node_index(const NodeId& id) const;   // -1 when absent
    int link_index(const LinkId& id) const;   // -1 when absent

    // Indices of links incident to the node, in file order.
    const std::vector<int>& incident_links(int node_index) const;

    const NodeId* core() const;               // nullptr unless exactly one core
    std::vector<NodeId> radio_units() const;  // file order
    std::vector<NodeId> computing_resources() const;

    bool hierarchical() const;  // metadata "hierarchical" == "true"

private:
    std::vector<Node> nodes_;
    std::vector<Link> links_;
    Metadata metadata_;
    std::map<NodeId, int> node_index_;
    std::map<LinkId, int> link_index_;
    std::vector<std::vector<int>> incident_;
};

struct Violation {
    std::string code;     // stable machine-readable tag
    std::string subject;  // offending node/link id ("" for whole-topology)
    std::string message;
};

using ValidationReport = std::vector<Violation>;

// Reports every invariant violation; an empty report means the topology is
// valid.  Violations are data, not failures.
ValidationReport validate_topology(const Topology& topology);

// --- DRC catalog ----------------------------------------------------------

enum class DrcSetLabel { NgRan3, NgRan2, CRan, DRan };

const char* to_string(DrcSetLabel s);
std::optional<DrcSetLabel> drc_set_label_from_string(const std::string& s);

// Sentinel for the latency bound of an absent sub-path; paired with a zero
// bandwidth demand so constraint code needs no special cases.
inline constexpr double kNoLatencyBound = std::numeric_limits<double>::infinity();

struct SubpathRequirement {
    double bandwidth_bps = 0.0;
    double latency_bound_s = kNoLatencyBound;
};

// One disaggregation option: how f1..f8 split across CU / DU / RU-site
// units, what each transport sub-path must sustain, and the option's
// standards-derived priority (smaller value = higher priority).
struct Drc {
    int id = 0;
    DrcSetLabel set_label = DrcSetLabel::DRan;
    std::vector<VnfId> cu_functions;  // for C-RAN this is the merged CU+DU unit
    std::vector<VnfId> du_functions;
    std::vector<VnfId> ru_functions;  // functions at the RU site; always contains f1
    SubpathRequirement backhaul;
    SubpathRequirement midhaul;
    SubpathRequirement fronthaul;
    int priority = 0;

    // Independent unit locations: NG-RAN(3) -> 3, NG-RAN(2)/C-RAN -> 2, D-RAN -> 1.
    int units() const;
    // Functions the RU site runs on its co-located CR (ru_functions minus f1).
    std::vector<VnfId> ru_colocated_functions() const;
    bool has_midhaul() const { return set_label == DrcSetLabel::NgRan3 || set_label == DrcSetLabel::NgRan2; }
    bool has_fronthaul() const { return set_label == DrcSetLabel::NgRan3 || set_label == DrcSetLabel::CRan; }
};

struct DrcCatalog {
    std::vector<Drc> drcs;
    std::map<VnfId, double> vnf_demands;  // f2..f8 -> reference cores

    const Drc* find(int drc_id) const;
    double demand(VnfId f) const;  // 0 for f1
    int max_priority() const;
};

// Catalog invariant check (stack-order partitions, label consistency,
// unique priorities, the paper-anchored entries).  Empty report = valid.
ValidationReport validate_catalog(const DrcCatalog& catalog);

// Stack-order partition of f1..f8 for one DRC; ru always contains f1.
struct UnitPartition {
    std::vector<VnfId> cu;
    std::vector<VnfId> du;
    std::vector<VnfId> ru;
};
UnitPartition unit_partition(const Drc& drc);

// The sub-path requirements that actually apply to this DRC, absent
// sub-paths omitted.  Key-set is a function of set_label only.
struct SubpathProfile {
    std::optional<SubpathRequirement> bh;
    std::optional<SubpathRequirement> mh;
    std::optional<SubpathRequirement> fh;
};
SubpathProfile subpath_profile(const Drc& drc);

}  // namespace placeran
