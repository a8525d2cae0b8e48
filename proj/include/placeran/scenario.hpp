// Deterministic, seeded generators for the evaluation instances: the T1
// ring network (51 transport nodes) and the T2 hierarchical network (128
// transport nodes), with LC/RC/HC capacity scenarios and F1/R1 radio-unit
// configurations.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "placeran/domain.hpp"
#include "placeran/json_io.hpp"

namespace placeran {

enum class TopologyKind { T1, T2 };
enum class CapacityScenario { LC, RC, HC };
enum class RuConfig { F1, R1 };

const char* to_string(TopologyKind k);
const char* to_string(CapacityScenario c);
const char* to_string(RuConfig r);
std::optional<TopologyKind> topology_kind_from_string(const std::string& s);
std::optional<CapacityScenario> capacity_scenario_from_string(const std::string& s);
std::optional<RuConfig> ru_config_from_string(const std::string& s);

// Per-transport-class computing resources.
struct ClassParams {
    int cr_count = 1;
    double cr_cap_lc = 0.0;  // reference cores under LC
    double cr_cap_hc = 0.0;  // under HC; RC draws uniformly in [lc, hc]
};

// Per-link-tier bandwidth and the distance feeding the latency model.
struct TierParams {
    double bw_lc = 0.0;  // bps under LC
    double bw_hc = 0.0;  // under HC; RC draws uniformly in [lc, hc]
    double distance_km = 0.0;
};

struct ParamsTable {
    std::map<TransportClass, ClassParams> classes;
    TierParams aggregation_link;  // core<->AG1 and AG1/AG2 interconnects
    TierParams access_link;       // links toward and between access nodes
    double core_link_distance_km = 5.0;
    double ru_link_distance_km = 0.5;
    // Additive latency components: propagation plus a fixed per-link term
    // covering forwarding, optical transit and regeneration.
    double propagation_s_per_km = 5e-6;
    double link_overhead_s = 5e-6;
    // T2 only: distances are statistical; LC uses the longest estimate and
    // HC the shortest, so extra capacity never worsens latency.
    double distance_mult_lc = 3.0;
    double distance_mult_rc = 2.0;
    double distance_mult_hc = 1.0;
    // R1 attachment probability per eligible transport node.
    double ru_prob = 0.5;
};

ParamsTable default_params(TopologyKind kind);
Json params_to_json(const ParamsTable& p);
ParamsTable params_from_json(const Json& j, TopologyKind kind);

struct ScenarioSpec {
    TopologyKind topology_kind = TopologyKind::T1;
    CapacityScenario capacity = CapacityScenario::RC;
    RuConfig ru_config = RuConfig::F1;
    std::uint64_t seed = 0;
    ParamsTable params;

    static ScenarioSpec make(TopologyKind kind, CapacityScenario cap, RuConfig ru,
                             std::uint64_t seed);
};

// Empty string when the spec is valid, otherwise the reason.
std::string validate_spec(const ScenarioSpec& spec);

// Node/link structure with transport classes and attached CRs; capacities
// and latencies are placeholders until apply_capacity runs.
// Throws std::invalid_argument when validate_spec rejects the spec.
Topology generate_topology(const ScenarioSpec& spec);

// Assigns CR processing capacities and link capacity/latency per the class
// table and capacity scenario.  Deterministic for a fixed spec.
Topology apply_capacity(const Topology& topology, const ScenarioSpec& spec);

// F1: one RU per non-AG1 transport node; R1: zero or one, seeded Bernoulli.
// AG1 nodes never receive RUs.
Topology attach_rus(const Topology& topology, const ScenarioSpec& spec);

// generate_topology | apply_capacity | attach_rus.
Topology generate_scenario(const ScenarioSpec& spec);

}  // namespace placeran
