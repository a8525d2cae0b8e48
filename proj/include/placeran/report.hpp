// Post-solve evaluation: normalized placement metrics, per-class
// occupations, the k-sensitivity sweep and the per-stage DRC-set
// comparison, plus the solution/report file writers.

#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "placeran/json_io.hpp"
#include "placeran/solve.hpp"

namespace placeran {

struct MetricsReport {
    ObjectiveVector objective;
    long long employed_crs = 0;
    long long phi2 = 0;

    double employed_cr_pct = 0.0;   // CRs running any virtualized function / |C|
    double aggregation_pct = 0.0;   // Phi2 / (7 * |B|)
    double unique_drc_pct = 0.0;    // distinct DRCs / 9
    double priority_sum_pct = 0.0;  // sum of priorities / (|B| * max priority)

    std::map<DrcSetLabel, long long> drc_set_histogram;  // all four labels present
    std::map<int, long long> per_drc_counts;             // only DRCs in use

    // Mean per-element load/capacity ratio over CRs (resp. links) grouped
    // by transport class; AC merges AC1 and AC2.
    std::map<std::string, double> cr_occupation_pct;
    std::map<std::string, double> link_occupation_pct;
    std::map<std::string, long long> employed_crs_per_class;

    // Mean latency of load-carrying links as a percentage of the reference;
    // absent when no reference latency was supplied.
    std::optional<double> avg_latency_pct;
};

// Mean latency over all links of a topology; the conventional reference is
// this value for the low-capacity T1 scenario.
double average_network_latency(const Topology& topology);

MetricsReport compute_metrics(const CompiledInstance& instance, const std::vector<int>& choice,
                              std::optional<double> reference_latency = std::nullopt);

// --- k sweep ---------------------------------------------------------------

struct KSweepRow {
    int k = 0;
    SolveStatus status = SolveStatus::Infeasible;
    long long v1 = 0;                   // 0 when no solution exists
    double stage1_objective_pct = 0.0;  // vs. the single-CR full-centralization reference
    double aggregation_pct = 0.0;
    long long phi2 = 0;
};

// Reference values for the percentage scale: all RUs fully centralized on
// one CR.
long long v1_reference(int ru_count);
long long phi2_reference(int ru_count);

std::vector<KSweepRow> k_sweep(const Topology& topology, const DrcCatalog& catalog, int k_max,
                               const SolveLimits& limits,
                               PathMetric metric = PathMetric::Latency);

// --- stage comparison ------------------------------------------------------

struct StageComparison {
    LexicographicResult result;
    // Histogram of the incumbent after stages 1, 2, 3 (empty map when that
    // stage produced no assignment).
    std::array<std::map<DrcSetLabel, long long>, 3> histograms;
};

StageComparison stage_comparison(const CompiledInstance& instance, const SolveLimits& limits);

std::map<DrcSetLabel, long long> drc_set_histogram(const CompiledInstance& instance,
                                                   const std::vector<int>& choice);

// --- serialization ---------------------------------------------------------

Json solution_to_json(const CompiledInstance& instance, const LexicographicResult& result);
Json metrics_to_json(const MetricsReport& report);
std::string metrics_to_csv(const MetricsReport& report);
Json k_sweep_to_json(const std::vector<KSweepRow>& rows);
std::string k_sweep_to_csv(const std::vector<KSweepRow>& rows);

}  // namespace placeran
