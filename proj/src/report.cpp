#include "placeran/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace placeran {

namespace {

// AC merges the two access tiers; Fig.-style class keys.
std::string class_key(TransportClass tc) {
    switch (tc) {
        case TransportClass::AG1: return "AG1";
        case TransportClass::AG2: return "AG2";
        case TransportClass::AC1:
        case TransportClass::AC2: return "AC";
    }
    return "AC";
}

int class_rank(TransportClass tc) {
    switch (tc) {
        case TransportClass::AG1: return 1;
        case TransportClass::AG2: return 2;
        case TransportClass::AC1: return 3;
        case TransportClass::AC2: return 4;
    }
    return 0;
}

// Transport class of the node a CR hangs off.
std::optional<TransportClass> cr_class(const Topology& topo, int cr_node) {
    for (int li : topo.incident_links(cr_node)) {
        const Link& l = topo.links()[li];
        const NodeId& other_id = l.a == topo.nodes()[cr_node].id ? l.b : l.a;
        const Node* other = topo.find_node(other_id);
        if (other && other->kind == NodeKind::Transport && other->transport_class)
            return other->transport_class;
    }
    return std::nullopt;
}

// A link takes the class of its deepest transport endpoint.
std::optional<TransportClass> link_class(const Topology& topo, const Link& l) {
    std::optional<TransportClass> best;
    for (const NodeId* nid : {&l.a, &l.b}) {
        const Node* n = topo.find_node(*nid);
        if (!n || n->kind != NodeKind::Transport || !n->transport_class) continue;
        if (!best || class_rank(*n->transport_class) > class_rank(*best))
            best = n->transport_class;
    }
    return best;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

double average_network_latency(const Topology& topology) {
    if (topology.links().empty()) return 0.0;
    double s = 0.0;
    for (const Link& l : topology.links()) s += l.latency_s;
    return s / static_cast<double>(topology.links().size());
}

long long v1_reference(int ru_count) {
    if (ru_count <= 0) return 0;
    return 8 - static_cast<long long>(kVirtualizableCount) * ru_count;
}

long long phi2_reference(int ru_count) {
    if (ru_count <= 0) return 0;
    return static_cast<long long>(kVirtualizableCount) * ru_count - kVirtualizableCount;
}

MetricsReport compute_metrics(const CompiledInstance& ci, const std::vector<int>& choice,
                              std::optional<double> reference_latency) {
    MetricsReport rep;
    const Topology& topo = *ci.topology;

    AssignmentValue val = evaluate_assignment(ci, choice);
    rep.objective = val.objective;
    rep.employed_crs = val.employed_crs;
    rep.phi2 = val.phi2;

    long long b = static_cast<long long>(ci.rus.size());
    long long c = static_cast<long long>(ci.crs.size());
    long long f = kVirtualizableCount;
    if (c > 0) rep.employed_cr_pct = 100.0 * static_cast<double>(val.employed_crs) / c;
    if (b > 0) {
        rep.aggregation_pct = 100.0 * static_cast<double>(val.phi2) / static_cast<double>(f * b);
        int omega_max = ci.catalog->max_priority();
        if (omega_max > 0)
            rep.priority_sum_pct =
                100.0 * static_cast<double>(val.objective.v3) / static_cast<double>(b * omega_max);
    }
    rep.unique_drc_pct = 100.0 * static_cast<double>(val.objective.v2) / 9.0;

    for (DrcSetLabel label : {DrcSetLabel::NgRan3, DrcSetLabel::NgRan2, DrcSetLabel::CRan,
                              DrcSetLabel::DRan})
        rep.drc_set_histogram[label] = 0;

    std::vector<double> link_load(ci.link_capacity.size(), 0.0);
    std::vector<double> cr_load(ci.cr_capacity.size(), 0.0);
    for (size_t r = 0; r < choice.size(); ++r) {
        const CompiledCandidate& cand = ci.candidates[r][choice[r]];
        const Drc* drc = ci.catalog->find(cand.drc_id);
        ++rep.drc_set_histogram[drc->set_label];
        ++rep.per_drc_counts[cand.drc_id];
        for (const auto& [li, bps] : cand.link_loads) link_load[li] += bps;
        for (const auto& [cr, g] : cand.cr_loads) cr_load[cr] += g;
    }

    // Per-class occupation: mean load/capacity ratio over employed CRs and
    // load-carrying links of each class.
    std::map<std::string, std::pair<double, long long>> cr_acc, link_acc;
    for (size_t cr = 0; cr < cr_load.size(); ++cr) {
        auto tc = cr_class(topo, ci.cr_node_index[cr]);
        if (!tc) continue;
        std::string key = class_key(*tc);
        if (cr_load[cr] > 0.0) {
            auto& [sum, n] = cr_acc[key];
            sum += cr_load[cr] / ci.cr_capacity[cr];
            ++n;
            ++rep.employed_crs_per_class[key];
        }
    }
    for (size_t li = 0; li < link_load.size(); ++li) {
        if (link_load[li] <= 0.0) continue;
        auto tc = link_class(topo, topo.links()[li]);
        if (!tc) continue;
        auto& [sum, n] = link_acc[class_key(*tc)];
        sum += link_load[li] / ci.link_capacity[li];
        ++n;
    }
    for (const std::string& key : {"AG1", "AG2", "AC"}) {
        if (auto it = cr_acc.find(key); it != cr_acc.end())
            rep.cr_occupation_pct[key] = 100.0 * it->second.first / it->second.second;
        else
            rep.cr_occupation_pct[key] = 0.0;
        if (auto it = link_acc.find(key); it != link_acc.end())
            rep.link_occupation_pct[key] = 100.0 * it->second.first / it->second.second;
        else
            rep.link_occupation_pct[key] = 0.0;
        rep.employed_crs_per_class.try_emplace(key, 0);
    }

    if (reference_latency && *reference_latency > 0.0) {
        double sum = 0.0;
        long long n = 0;
        for (size_t li = 0; li < link_load.size(); ++li)
            if (link_load[li] > 0.0) {
                sum += topo.links()[li].latency_s;
                ++n;
            }
        rep.avg_latency_pct = n > 0 ? 100.0 * (sum / n) / *reference_latency : 0.0;
    }
    return rep;
}

std::map<DrcSetLabel, long long> drc_set_histogram(const CompiledInstance& ci,
                                                   const std::vector<int>& choice) {
    std::map<DrcSetLabel, long long> hist;
    for (DrcSetLabel label : {DrcSetLabel::NgRan3, DrcSetLabel::NgRan2, DrcSetLabel::CRan,
                              DrcSetLabel::DRan})
        hist[label] = 0;
    for (size_t r = 0; r < choice.size(); ++r) {
        const Drc* drc = ci.catalog->find(ci.candidates[r][choice[r]].drc_id);
        ++hist[drc->set_label];
    }
    return hist;
}

std::vector<KSweepRow> k_sweep(const Topology& topology, const DrcCatalog& catalog, int k_max,
                               const SolveLimits& limits, PathMetric metric) {
    if (k_max < 1) throw std::invalid_argument("k_max must be at least 1");
    std::vector<KSweepRow> rows;
    int b = static_cast<int>(topology.radio_units().size());
    long long v1_ref = v1_reference(b);
    long long phi2_ref = phi2_reference(b);
    for (int k = 1; k <= k_max; ++k) {
        KSweepRow row;
        row.k = k;
        CandidatePool pool = build_candidate_pool(topology, catalog, k, metric);
        CompiledInstance ci = compile_instance(topology, catalog, pool);
        if (!rus_without_candidates(ci).empty()) {
            row.status = SolveStatus::Infeasible;
            rows.push_back(row);
            continue;
        }
        LexicographicResult res = solve_lexicographic(ci, limits);
        row.status = res.status;
        if (!res.choice.empty() && res.status != SolveStatus::Infeasible) {
            AssignmentValue val = evaluate_assignment(ci, res.choice);
            row.v1 = val.objective.v1;
            row.phi2 = val.phi2;
            if (v1_ref != 0)
                row.stage1_objective_pct =
                    100.0 * static_cast<double>(val.objective.v1) / static_cast<double>(v1_ref);
            if (phi2_ref != 0)
                row.aggregation_pct =
                    100.0 * static_cast<double>(val.phi2) / static_cast<double>(phi2_ref);
        }
        rows.push_back(row);
    }
    return rows;
}

StageComparison stage_comparison(const CompiledInstance& ci, const SolveLimits& limits) {
    StageComparison cmp;
    cmp.result = solve_lexicographic(ci, limits);
    const StageSolution* stages[3] = {&cmp.result.stage1, &cmp.result.stage2, &cmp.result.stage3};
    for (int s = 0; s < 3; ++s)
        if (stages[s]->has_assignment())
            cmp.histograms[s] = drc_set_histogram(ci, stages[s]->choice);
    return cmp;
}

Json solution_to_json(const CompiledInstance& ci, const LexicographicResult& result) {
    Json j;
    j["status"] = to_string(result.status);
    j["objective_vector"] = {{"v1", result.objective.v1},
                             {"v2", result.objective.v2},
                             {"v3", result.objective.v3}};
    Json assignment = Json::array();
    if (result.choice.size() == ci.rus.size()) {
        for (size_t r = 0; r < ci.rus.size(); ++r) {
            const CandidateAssignment& cand = *ci.candidates[r][result.choice[r]].source;
            Json a;
            a["ru"] = ci.rus[r];
            a["drc"] = cand.drc_id;
            a["route"] = cand.route->nodes;
            a["cu_host"] = cand.cu_host ? Json(*cand.cu_host) : Json(nullptr);
            a["du_host"] = cand.du_host ? Json(*cand.du_host) : Json(nullptr);
            assignment.push_back(std::move(a));
        }
    }
    j["assignment"] = std::move(assignment);
    Json stats;
    const StageSolution* stages[3] = {&result.stage1, &result.stage2, &result.stage3};
    const char* names[3] = {"stage1", "stage2", "stage3"};
    for (int s = 0; s < 3; ++s) {
        Json sj;
        sj["status"] = to_string(stages[s]->status);
        sj["objective"] = stages[s]->objective;
        sj["bound"] = stages[s]->bound;
        sj["explored_nodes"] = stages[s]->explored_nodes;
        stats[names[s]] = std::move(sj);
    }
    j["stats"] = std::move(stats);
    return j;
}

Json metrics_to_json(const MetricsReport& rep) {
    Json j;
    j["objective_vector"] = {{"v1", rep.objective.v1},
                             {"v2", rep.objective.v2},
                             {"v3", rep.objective.v3}};
    j["employed_crs"] = rep.employed_crs;
    j["phi2"] = rep.phi2;
    j["employed_cr_pct"] = rep.employed_cr_pct;
    j["aggregation_pct"] = rep.aggregation_pct;
    j["unique_drc_pct"] = rep.unique_drc_pct;
    j["priority_sum_pct"] = rep.priority_sum_pct;
    Json hist;
    for (const auto& [label, count] : rep.drc_set_histogram) hist[to_string(label)] = count;
    j["drc_set_histogram"] = std::move(hist);
    Json per_drc;
    for (const auto& [id, count] : rep.per_drc_counts) per_drc[std::to_string(id)] = count;
    j["per_drc_counts"] = std::move(per_drc);
    j["cr_occupation_pct"] = rep.cr_occupation_pct;
    j["link_occupation_pct"] = rep.link_occupation_pct;
    j["employed_crs_per_class"] = rep.employed_crs_per_class;
    if (rep.avg_latency_pct) j["avg_latency_pct"] = *rep.avg_latency_pct;
    return j;
}

std::string metrics_to_csv(const MetricsReport& rep) {
    std::ostringstream out;
    out << "metric,value\n";
    out << "v1," << rep.objective.v1 << "\n";
    out << "v2," << rep.objective.v2 << "\n";
    out << "v3," << rep.objective.v3 << "\n";
    out << "employed_crs," << rep.employed_crs << "\n";
    out << "phi2," << rep.phi2 << "\n";
    out << "employed_cr_pct," << fmt(rep.employed_cr_pct) << "\n";
    out << "aggregation_pct," << fmt(rep.aggregation_pct) << "\n";
    out << "unique_drc_pct," << fmt(rep.unique_drc_pct) << "\n";
    out << "priority_sum_pct," << fmt(rep.priority_sum_pct) << "\n";
    for (const auto& [label, count] : rep.drc_set_histogram)
        out << "histogram_" << to_string(label) << "," << count << "\n";
    for (const auto& [id, count] : rep.per_drc_counts)
        out << "drc_" << id << "," << count << "\n";
    for (const auto& [key, pct] : rep.cr_occupation_pct)
        out << "cr_occupation_pct_" << key << "," << fmt(pct) << "\n";
    for (const auto& [key, pct] : rep.link_occupation_pct)
        out << "link_occupation_pct_" << key << "," << fmt(pct) << "\n";
    for (const auto& [key, count] : rep.employed_crs_per_class)
        out << "employed_crs_" << key << "," << count << "\n";
    if (rep.avg_latency_pct) out << "avg_latency_pct," << fmt(*rep.avg_latency_pct) << "\n";
    return out.str();
}

Json k_sweep_to_json(const std::vector<KSweepRow>& rows) {
    Json arr = Json::array();
    for (const KSweepRow& row : rows) {
        Json j;
        j["k"] = row.k;
        j["status"] = to_string(row.status);
        j["v1"] = row.v1;
        j["phi2"] = row.phi2;
        j["stage1_objective_pct"] = row.stage1_objective_pct;
        j["aggregation_pct"] = row.aggregation_pct;
        arr.push_back(std::move(j));
    }
    return arr;
}

std::string k_sweep_to_csv(const std::vector<KSweepRow>& rows) {
    std::ostringstream out;
    out << "k,status,v1,phi2,stage1_objective_pct,aggregation_pct\n";
    for (const KSweepRow& row : rows)
        out << row.k << "," << to_string(row.status) << "," << row.v1 << "," << row.phi2 << ","
            << fmt(row.stage1_objective_pct) << "," << fmt(row.aggregation_pct) << "\n";
    return out.str();
}

}  // namespace placeran
