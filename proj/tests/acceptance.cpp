// Acceptance gate: one pass/fail line per criterion, exit code = number of
// failures.  Budgets for the large generated instances come from the
// environment (seconds): PLACERAN_ACCEPT_T1_BUDGET (default 1800) and
// PLACERAN_ACCEPT_T2_BUDGET (default 14400).

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "placeran/report.hpp"
#include "placeran/scenario.hpp"
#include "placeran/solve.hpp"

using namespace placeran;
using namespace placeran::testfix;

namespace {

int g_failures = 0;

void report_line(int index, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s  criterion %d (%s): %s\n", pass ? "PASS" : "FAIL", index, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double now_seconds() {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
}

double env_budget(const char* name, double fallback) {
    const char* v = std::getenv(name);
    if (!v || !*v) return fallback;
    return std::atof(v);
}

// Every solution that any criterion produces is registered here so the
// audit (criterion 6) and the histogram identity (criterion 7) cover all
// of them.
long long g_audit_checked = 0, g_audit_violations = 0;
long long g_hist_checked = 0, g_hist_bad = 0;

void register_solution(const CompiledInstance& inst, const std::vector<int>& choice) {
    ++g_audit_checked;
    if (!audit_assignment(inst, choice).empty()) ++g_audit_violations;
    ++g_hist_checked;
    MetricsReport m = compute_metrics(inst, choice);
    long long total = 0;
    for (auto& [label, count] : m.drc_set_histogram) total += count;
    if (total != static_cast<long long>(inst.rus.size())) ++g_hist_bad;
}

DrcCatalog catalog_subset(std::initializer_list<int> ids) {
    DrcCatalog full = builtin_default_catalog();
    DrcCatalog out;
    out.vnf_demands = full.vnf_demands;
    for (int id : ids) out.drcs.push_back(*full.find(id));
    return out;
}

// A generated-scenario solve with everything kept alive for reporting.
struct BigSolve {
    std::string label;
    Topology topology;
    CandidatePool pool;
    CompiledInstance instance;
    LexicographicResult result;
    double wall_seconds = 0.0;
    MetricsReport metrics;

    bool certified() const { return result.status == SolveStatus::Optimal; }
};

const DrcCatalog& shared_catalog() {
    static DrcCatalog cat = builtin_default_catalog();
    return cat;
}

std::unique_ptr<BigSolve> run_big(const std::string& label, TopologyKind kind,
                                  CapacityScenario cap, std::uint64_t seed, int k,
                                  double budget_s) {
    auto bs = std::make_unique<BigSolve>();
    bs->label = label;
    bs->topology = generate_scenario(ScenarioSpec::make(kind, cap, RuConfig::F1, seed));
    bs->pool = build_candidate_pool(bs->topology, shared_catalog(), k);
    bs->instance = compile_instance(bs->topology, shared_catalog(), bs->pool);
    SolveLimits limits;
    limits.time_budget_s = budget_s;
    limits.require_optimal = false;
    double t0 = now_seconds();
    bs->result = solve_lexicographic(bs->instance, limits);
    bs->wall_seconds = now_seconds() - t0;
    if (!bs->result.choice.empty()) {
        bs->metrics = compute_metrics(bs->instance, bs->result.choice);
        register_solution(bs->instance, bs->result.choice);
    }
    std::printf("  [%s] status=%s v1=%lld agg=%.2f%% wall=%.1fs nodes=%lld/%lld/%lld\n",
                bs->label.c_str(), to_string(bs->result.status), bs->result.objective.v1,
                bs->metrics.aggregation_pct, bs->wall_seconds, bs->result.stage1.explored_nodes,
                bs->result.stage2.explored_nodes, bs->result.stage3.explored_nodes);
    std::fflush(stdout);
    return bs;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// All complete choices of an instance.
void for_each_choice(const CompiledInstance& inst,
                     const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> choice(inst.rus.size(), 0);
    while (true) {
        fn(choice);
        size_t i = 0;
        for (; i < choice.size(); ++i) {
            if (++choice[i] < static_cast<int>(inst.candidates[i].size())) break;
            choice[i] = 0;
        }
        if (i == choice.size()) break;
    }
}

// --- criterion 1: oracle equivalence ---------------------------------------

bool criterion1(std::vector<std::string>* solution_dumps) {
    double t0 = now_seconds();
    int compared = 0, mismatches = 0;
    for (std::uint64_t seed = 1; compared < 100 && seed < 1000; ++seed) {
        Topology topo = random_tiny_topology(seed);
        CandidatePool pool = build_candidate_pool(topo, shared_catalog(), 3);
        CompiledInstance inst = compile_instance(topo, shared_catalog(), pool);
        if (combination_count(inst) > 1e6) continue;
        if (!rus_without_candidates(inst).empty()) {
            if (brute_force(inst).feasible) ++mismatches;
            continue;
        }
        BruteForceResult oracle = brute_force(inst);
        LexicographicResult lex = solve_lexicographic(inst, SolveLimits{});
        ++compared;
        if (!oracle.feasible) {
            if (lex.status != SolveStatus::Infeasible) ++mismatches;
            if (solution_dumps) solution_dumps->push_back("infeasible");
            continue;
        }
        bool same = lex.status == SolveStatus::Optimal && lex.objective == oracle.objective;
        AssignmentValue val = evaluate_assignment(inst, lex.choice);
        same = same && val.feasible && val.objective == oracle.objective;
        if (!same) ++mismatches;
        register_solution(inst, lex.choice);
        if (solution_dumps)
            solution_dumps->push_back(solution_to_json(inst, lex).dump(2));
    }
    double elapsed = now_seconds() - t0;
    bool pass = compared == 100 && mismatches == 0 && elapsed < 300.0;
    report_line(1, "oracle equivalence",
                pass, fmt("%d instances, %d mismatches, %.1f s (budget 300 s)", compared,
                          mismatches, elapsed));
    return pass;
}

// --- criterion 2: stage necessity ------------------------------------------

struct TieFixtureResult {
    bool ok = false;
    std::string detail;
    std::string dump;  // solution bytes for the determinism criterion
};

TieFixtureResult run_stage2_fixture() {
    TieFixtureResult out;
    DrcCatalog cat = builtin_default_catalog();
    Topology topo = stage2_tie_topology();
    CandidatePool pool = build_candidate_pool(topo, cat, 2);
    CompiledInstance inst = compile_instance(topo, cat, pool);
    BruteForceResult oracle = brute_force(inst);
    if (!oracle.feasible) {
        out.detail = "tie fixture unexpectedly infeasible";
        return out;
    }
    // Profile of the first-stage optima: how many distinct option ids can a
    // first-stage-optimal placement use?
    long long v1s = oracle.objective.v1;
    int max_unique = 0;
    for_each_choice(inst, [&](const std::vector<int>& choice) {
        AssignmentValue val = evaluate_assignment(inst, choice);
        if (!val.feasible || val.objective.v1 != v1s) return;
        std::set<int> drcs;
        for (size_t r = 0; r < choice.size(); ++r)
            drcs.insert(inst.candidates[r][choice[r]].drc_id);
        max_unique = std::max(max_unique, static_cast<int>(drcs.size()));
    });
    LexicographicResult lex = solve_lexicographic(inst, SolveLimits{});
    if (lex.status != SolveStatus::Optimal) {
        out.detail = "tie fixture did not certify";
        return out;
    }
    register_solution(inst, lex.choice);
    out.dump = solution_to_json(inst, lex).dump(2);
    out.ok = lex.stage2.objective < max_unique;
    out.detail = fmt("stage-2 optimum %lld < worst stage-1-optimal spread %d",
                     lex.stage2.objective, max_unique);
    return out;
}

TieFixtureResult run_stage3_fixture() {
    TieFixtureResult out;
    DrcCatalog cat = builtin_default_catalog();
    Topology topo = stage3_tie_topology();
    CandidatePool pool = build_candidate_pool(topo, cat, 2);
    CompiledInstance inst = compile_instance(topo, cat, pool);
    BruteForceResult oracle = brute_force(inst);
    if (!oracle.feasible) {
        out.detail = "priority fixture unexpectedly infeasible";
        return out;
    }
    // Among placements optimal through stage 2, the priority sums must
    // actually differ, and stage 3 must return the smallest.
    long long v1s = oracle.objective.v1, v2s = oracle.objective.v2;
    std::set<long long> omegas;
    for_each_choice(inst, [&](const std::vector<int>& choice) {
        AssignmentValue val = evaluate_assignment(inst, choice);
        if (!val.feasible || val.objective.v1 != v1s || val.objective.v2 != v2s) return;
        omegas.insert(val.objective.v3);
    });
    LexicographicResult lex = solve_lexicographic(inst, SolveLimits{});
    if (lex.status != SolveStatus::Optimal) {
        out.detail = "priority fixture did not certify";
        return out;
    }
    register_solution(inst, lex.choice);
    out.dump = solution_to_json(inst, lex).dump(2);
    out.ok = omegas.size() >= 2 && lex.stage3.objective == *omegas.begin();
    out.detail = fmt("%zu distinct priority sums among stage-2 optima, stage 3 picked %lld "
                     "(minimum %lld)",
                     omegas.size(), lex.stage3.objective, *omegas.begin());
    return out;
}

}  // namespace

int main() {
    std::printf("acceptance: starting\n");
    double t1_budget = env_budget("PLACERAN_ACCEPT_T1_BUDGET", 1800.0);
    double t2_budget = env_budget("PLACERAN_ACCEPT_T2_BUDGET", 14400.0);

    // Criterion 1 (plus material for criterion 8).
    std::vector<std::string> c1_first;
    criterion1(&c1_first);

    // Criterion 2.
    TieFixtureResult f2 = run_stage2_fixture();
    TieFixtureResult f3 = run_stage3_fixture();
    report_line(2, "stage necessity", f2.ok && f3.ok, f2.detail + "; " + f3.detail);

    // Criteria 3-5: generated instances.  The three capacity levels of both
    // network shapes, plus the reduced route count for criterion 4.
    const std::uint64_t seed = 1;
    std::vector<std::unique_ptr<BigSolve>> t1, t2;
    t1.push_back(run_big("T1-LC", TopologyKind::T1, CapacityScenario::LC, seed, 4, t1_budget));
    t1.push_back(run_big("T1-RC", TopologyKind::T1, CapacityScenario::RC, seed, 4, t1_budget));
    t1.push_back(run_big("T1-HC", TopologyKind::T1, CapacityScenario::HC, seed, 4, t1_budget));
    std::unique_ptr<BigSolve> t1k3 =
        run_big("T1-HC-k3", TopologyKind::T1, CapacityScenario::HC, seed, 3, t1_budget);
    t2.push_back(run_big("T2-LC", TopologyKind::T2, CapacityScenario::LC, seed, 4, t2_budget));
    t2.push_back(run_big("T2-RC", TopologyKind::T2, CapacityScenario::RC, seed, 4, t2_budget));
    t2.push_back(run_big("T2-HC", TopologyKind::T2, CapacityScenario::HC, seed, 4, t2_budget));

    // Criterion 3: capacity trend, certified.
    {
        bool pass = true;
        std::string detail;
        for (auto* family : {&t1, &t2}) {
            for (auto& bs : *family) pass = pass && bs->certified();
            for (size_t i = 1; i < family->size(); ++i) {
                pass = pass && (*family)[i]->result.objective.v1 <=
                                   (*family)[i - 1]->result.objective.v1;
                pass = pass && (*family)[i]->metrics.aggregation_pct >=
                                   (*family)[i - 1]->metrics.aggregation_pct - 1e-9;
            }
        }
        for (auto* family : {&t1, &t2})
            for (auto& bs : *family)
                detail += fmt("%s %s v1=%lld agg=%.2f%%; ", bs->label.c_str(),
                              to_string(bs->result.status), bs->result.objective.v1,
                              bs->metrics.aggregation_pct);
        report_line(3, "capacity trend certified", pass, detail);
    }

    // Criterion 4: route-count saturation at k=3.
    {
        BigSolve* k4 = t1.back().get();
        bool pass = k4->certified() && t1k3->certified() &&
                    k4->result.stage1.objective == t1k3->result.stage1.objective &&
                    std::abs(k4->metrics.aggregation_pct - t1k3->metrics.aggregation_pct) < 1e-9;
        report_line(4, "route-count saturation", pass,
                    fmt("k=3 v1=%lld agg=%.2f%% vs k=4 v1=%lld agg=%.2f%%",
                        t1k3->result.stage1.objective, t1k3->metrics.aggregation_pct,
                        k4->result.stage1.objective, k4->metrics.aggregation_pct));
    }

    // Criterion 5: scale targets.
    {
        BigSolve* t1hc = t1.back().get();
        bool t1_ok = t1hc->certified() && t1hc->wall_seconds < 1800.0;
        BigSolve* t2hc = t2.back().get();
        double gap = t2hc->result.stage1.gap();
        bool t2_ok = (t2hc->certified() && t2hc->wall_seconds < 14400.0) ||
                     (!t2hc->result.choice.empty() && gap <= 0.01);
        report_line(5, "scale target", t1_ok && t2_ok,
                    fmt("T1-HC %s in %.1f s (limit 1800); T2-HC %s in %.1f s (limit 14400, "
                        "stage-1 gap %.3f%%)",
                        to_string(t1hc->result.status), t1hc->wall_seconds,
                        to_string(t2hc->result.status), t2hc->wall_seconds, 100.0 * gap));
    }

    // Criterion 6: the independent audit over every solution above.
    report_line(6, "post-solve audit", g_audit_violations == 0 && g_audit_checked > 0,
                fmt("%lld solutions audited, %lld with violations", g_audit_checked,
                    g_audit_violations));

    // Criterion 7: normalization identities.
    {
        DrcCatalog cat = builtin_default_catalog();
        Topology shared = two_ru_shared_cr();
        CandidatePool pool = build_candidate_pool(shared, cat, 2);
        CompiledInstance inst = compile_instance(shared, cat, pool);
        LexicographicResult lex = solve_lexicographic(inst, SolveLimits{});
        bool half = false;
        if (lex.status == SolveStatus::Optimal) {
            register_solution(inst, lex.choice);
            half = std::abs(compute_metrics(inst, lex.choice).aggregation_pct - 50.0) < 1e-9;
        }

        DrcCatalog local_cat = catalog_subset({19});
        Topology local = all_local_topology(3);
        CandidatePool lpool = build_candidate_pool(local, local_cat, 2);
        CompiledInstance linst = compile_instance(local, local_cat, lpool);
        LexicographicResult llex = solve_lexicographic(linst, SolveLimits{});
        bool worst = false;
        if (llex.status == SolveStatus::Optimal) {
            register_solution(linst, llex.choice);
            worst = std::abs(compute_metrics(linst, llex.choice).priority_sum_pct - 100.0) < 1e-9;
        }
        report_line(7, "normalization identities", half && worst && g_hist_bad == 0,
                    fmt("shared-CR aggregation 50%%: %s; all-local priority 100%%: %s; "
                        "histogram totals correct on %lld/%lld solutions",
                        half ? "yes" : "no", worst ? "yes" : "no", g_hist_checked - g_hist_bad,
                        g_hist_checked));
    }

    // Criterion 8: repeat criteria 1-4 and byte-compare the outputs.
    {
        std::vector<std::string> c1_second;
        criterion1(&c1_second);
        bool c1_same = c1_first == c1_second;

        TieFixtureResult f2b = run_stage2_fixture();
        TieFixtureResult f3b = run_stage3_fixture();
        bool c2_same = f2.dump == f2b.dump && f3.dump == f3b.dump;

        auto rerun_same = [&](BigSolve& first, const char* label, TopologyKind kind,
                              CapacityScenario cap, int k, double budget) {
            std::unique_ptr<BigSolve> again = run_big(label, kind, cap, seed, k, budget);
            return solution_to_json(first.instance, first.result).dump(2) ==
                       solution_to_json(again->instance, again->result).dump(2) &&
                   metrics_to_csv(first.metrics) == metrics_to_csv(again->metrics);
        };
        bool c3_same = rerun_same(*t1[0], "T1-LC-rerun", TopologyKind::T1, CapacityScenario::LC,
                                  4, t1_budget) &&
                       rerun_same(*t1[2], "T1-HC-rerun", TopologyKind::T1, CapacityScenario::HC,
                                  4, t1_budget) &&
                       rerun_same(*t2[2], "T2-HC-rerun", TopologyKind::T2, CapacityScenario::HC,
                                  4, t2_budget);
        bool c4_same = rerun_same(*t1k3, "T1-HC-k3-rerun", TopologyKind::T1,
                                  CapacityScenario::HC, 3, t1_budget);
        report_line(8, "determinism", c1_same && c2_same && c3_same && c4_same,
                    fmt("repeat runs byte-identical: c1=%s c2=%s c3=%s c4=%s",
                        c1_same ? "yes" : "no", c2_same ? "yes" : "no", c3_same ? "yes" : "no",
                        c4_same ? "yes" : "no"));
    }

    std::printf("acceptance: %d criteria failed\n", g_failures);
    return g_failures;
}
