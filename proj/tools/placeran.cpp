// Command-line entry point: gen, solve, report, sweep-k, oracle, export-lp,
// validate.  Exit codes: 0 success, 1 usage/input error, 2 infeasible
// instance, 3 budget exceeded without a proven optimum.  All errors are
// printed as single-line JSON on stderr.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "placeran/json_io.hpp"
#include "placeran/report.hpp"
#include "placeran/scenario.hpp"
#include "placeran/solve.hpp"

using namespace placeran;

namespace {

struct CliError {
    int code;
    std::string message;
    Json details = Json::object();
};

DrcCatalog resolve_catalog(const std::string& path) {
    if (path.empty()) return builtin_default_catalog();
    DrcCatalog catalog = load_catalog(path);
    ValidationReport report = validate_catalog(catalog);
    if (!report.empty()) {
        Json v = Json::array();
        for (const auto& violation : report)
            v.push_back({{"code", violation.code},
                         {"subject", violation.subject},
                         {"message", violation.message}});
        throw CliError{1, "invalid catalog: " + path, {{"violations", v}}};
    }
    return catalog;
}

Topology load_valid_topology(const std::string& path) {
    Topology topo = load_topology(path);
    ValidationReport report = validate_topology(topo);
    if (!report.empty()) {
        Json v = Json::array();
        for (const auto& violation : report)
            v.push_back({{"code", violation.code},
                         {"subject", violation.subject},
                         {"message", violation.message}});
        throw CliError{2, "invalid topology: " + path, {{"violations", v}}};
    }
    return topo;
}

PathMetric parse_metric(const std::string& s) {
    if (s == "latency") return PathMetric::Latency;
    if (s == "hops") return PathMetric::Hops;
    throw CliError{1, "unknown path metric: " + s};
}

void require_feasible_pool(const CompiledInstance& ci) {
    std::vector<NodeId> empty = rus_without_candidates(ci);
    if (empty.empty()) return;
    Json rus = Json::array();
    for (const NodeId& ru : empty) rus.push_back(ru);
    throw CliError{2, "infeasible instance: RUs without any admissible candidate",
                   {{"rus", rus}}};
}

int exit_code_for(SolveStatus status, bool require_optimal) {
    switch (status) {
        case SolveStatus::Optimal: return 0;
        case SolveStatus::Feasible: return 0;
        case SolveStatus::Infeasible: return 2;
        case SolveStatus::BudgetExceeded: return require_optimal ? 3 : 0;
    }
    return 1;
}

// Map a solution file's per-RU (drc, route, hosts) entries back onto
// candidate ordinals of a freshly compiled instance.
std::vector<int> choice_from_solution(const CompiledInstance& ci, const Json& sol) {
    if (!sol.contains("assignment") || !sol["assignment"].is_array() ||
        sol["assignment"].size() != ci.rus.size())
        throw CliError{1, "solution file does not match the instance (RU count differs)"};
    std::vector<int> choice(ci.rus.size(), -1);
    for (const Json& a : sol["assignment"]) {
        NodeId ru = a.at("ru").get<NodeId>();
        int drc = a.at("drc").get<int>();
        std::vector<NodeId> route = a.at("route").get<std::vector<NodeId>>();
        std::optional<NodeId> cu, du;
        if (!a.at("cu_host").is_null()) cu = a["cu_host"].get<NodeId>();
        if (!a.at("du_host").is_null()) du = a["du_host"].get<NodeId>();
        int r = -1;
        for (size_t i = 0; i < ci.rus.size(); ++i)
            if (ci.rus[i] == ru) r = static_cast<int>(i);
        if (r < 0) throw CliError{1, "solution names an unknown RU: " + ru};
        for (const CompiledCandidate& cand : ci.candidates[r]) {
            const CandidateAssignment& src = *cand.source;
            if (src.drc_id == drc && src.route->nodes == route && src.cu_host == cu &&
                src.du_host == du) {
                choice[r] = cand.ordinal;
                break;
            }
        }
        if (choice[r] < 0)
            throw CliError{1,
                           "solution entry for RU " + ru +
                               " matches no candidate (same --k and --path-metric as the solve?)"};
    }
    return choice;
}

Json pool_to_json(const CandidatePool& pool) {
    Json arr = Json::array();
    for (size_t r = 0; r < pool.rus.size(); ++r) {
        Json entry;
        entry["ru"] = pool.rus[r];
        Json cands = Json::array();
        for (const CandidateAssignment& c : pool.per_ru[r]) {
            Json cj;
            cj["drc"] = c.drc_id;
            cj["route"] = c.route->nodes;
            cj["cu_host"] = c.cu_host ? Json(*c.cu_host) : Json(nullptr);
            cj["du_host"] = c.du_host ? Json(*c.du_host) : Json(nullptr);
            cj["bh_end"] = c.bh_end;
            cj["mh_end"] = c.mh_end;
            cands.push_back(std::move(cj));
        }
        entry["candidates"] = std::move(cands);
        arr.push_back(std::move(entry));
    }
    return arr;
}

// Literal-formula placement summary: per-CR and per-(CR, function) counts
// pushed through the ceiling expressions verbatim, for comparison with the
// indicator reading used by the optimizer.
Json phi_summary(const CompiledInstance& ci, const std::vector<int>& choice,
                 const std::string& mode) {
    long long n_cr = static_cast<long long>(ci.crs.size());
    std::vector<long long> cr_count(ci.crs.size(), 0);
    std::vector<long long> pair_count(ci.pair_count(), 0);
    long long placed = 0;
    for (size_t r = 0; r < choice.size(); ++r) {
        const CompiledCandidate& cand = ci.candidates[r][choice[r]];
        for (int cr : cand.cr_opens) ++cr_count[cr];
        for (int p : cand.pair_opens) ++pair_count[p];
        placed += cand.placed_functions;
    }
    long long phi1 = 0, phi2 = 0;
    if (mode == "indicator") {
        for (long long c : cr_count) phi1 += c > 0 ? 1 : 0;
        for (long long p : pair_count) phi2 += p > 0 ? p - 1 : 0;
    } else if (mode == "literal") {
        for (long long c : cr_count)
            phi1 += static_cast<long long>(
                std::ceil(static_cast<double>(c) / static_cast<double>(n_cr)));
        for (long long p : pair_count)
            phi2 += p - static_cast<long long>(std::ceil(static_cast<double>(p) / 8.0));
    } else {
        throw CliError{1, "unknown phi mode: " + mode};
    }
    return Json{{"mode", mode}, {"phi1", phi1}, {"phi2", phi2}, {"placed", placed}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact planner for disaggregated RAN function placement"};
    app.require_subcommand(1);
    app.set_config("--config");

    std::string catalog_path;
    std::string log_level = "info";
    app.add_option("--catalog", catalog_path, "DRC catalog JSON (default: built-in)")
        ->envname("PLACERAN_CATALOG");
    app.add_option("--log-level", log_level, "quiet|info|debug");

    // --- gen ---------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate a scenario topology");
    std::string g_topology = "T1", g_capacity = "RC", g_ru = "F1", g_params, g_out;
    std::uint64_t g_seed = 0;
    double g_ru_prob = -1.0;
    gen->add_option("--topology", g_topology, "T1|T2");
    gen->add_option("--capacity", g_capacity, "LC|RC|HC");
    gen->add_option("--ru", g_ru, "F1|R1");
    gen->add_option("--seed", g_seed, "generator seed");
    gen->add_option("--params", g_params, "parameter-table JSON overriding the defaults");
    gen->add_option("--ru-prob", g_ru_prob, "R1 attachment probability override");
    gen->add_option("--out", g_out, "output topology file")->required();
    gen->callback([&] {
        auto kind = topology_kind_from_string(g_topology);
        auto cap = capacity_scenario_from_string(g_capacity);
        auto ru = ru_config_from_string(g_ru);
        if (!kind) throw CliError{1, "unknown topology kind: " + g_topology};
        if (!cap) throw CliError{1, "unknown capacity scenario: " + g_capacity};
        if (!ru) throw CliError{1, "unknown RU configuration: " + g_ru};
        ScenarioSpec spec = ScenarioSpec::make(*kind, *cap, *ru, g_seed);
        if (!g_params.empty())
            spec.params = params_from_json(Json::parse(read_text(g_params)), *kind);
        if (g_ru_prob >= 0.0) spec.params.ru_prob = g_ru_prob;
        std::string why = validate_spec(spec);
        if (!why.empty()) throw CliError{1, "invalid scenario spec: " + why};
        Topology topo = generate_scenario(spec);
        ValidationReport report = validate_topology(topo);
        if (!report.empty())
            throw CliError{1, "internal error: generated topology failed validation"};
        save_topology(topo, g_out);
    });

    // --- validate ----------------------------------------------------------
    auto* validate = app.add_subcommand("validate", "check a topology (and catalog) file");
    std::string v_in;
    validate->add_option("--in", v_in, "topology file")->required();
    validate->callback([&] {
        Topology topo = load_topology(v_in);
        ValidationReport report = validate_topology(topo);
        if (!catalog_path.empty()) {
            DrcCatalog catalog = load_catalog(catalog_path);
            ValidationReport cat = validate_catalog(catalog);
            report.insert(report.end(), cat.begin(), cat.end());
        }
        Json v = Json::array();
        for (const auto& violation : report)
            v.push_back({{"code", violation.code},
                         {"subject", violation.subject},
                         {"message", violation.message}});
        std::cout << Json{{"valid", report.empty()}, {"violations", v}}.dump() << "\n";
        if (!report.empty()) throw CliError{2, "validation failed", {{"count", report.size()}}};
    });

    // --- solve -------------------------------------------------------------
    auto* solve = app.add_subcommand("solve", "three-stage exact solve");
    std::string s_in, s_out, s_metric = "latency", s_dump_candidates, s_dump_program;
    int s_k = 4, s_workers = 1;
    double s_time_limit = 3600.0;
    long long s_node_limit = LLONG_MAX;
    bool s_require_optimal = true;
    solve->add_option("--in", s_in, "topology file")->required();
    solve->add_option("--out", s_out, "solution file")->required();
    solve->add_option("--k", s_k, "routes per RU");
    solve->add_option("--path-metric", s_metric, "latency|hops");
    solve->add_option("--time-limit", s_time_limit, "seconds per stage");
    solve->add_option("--node-limit", s_node_limit, "search nodes per stage");
    solve->add_option("--workers", s_workers, "search workers (determinism requires 1)");
    solve->add_flag("--require-optimal,!--no-require-optimal", s_require_optimal,
                    "exit 3 unless optimality is proven");
    solve->add_option("--dump-candidates", s_dump_candidates, "write the candidate pool JSON");
    solve->add_option("--dump-program", s_dump_program, "write the stage-1 program in LP format");
    solve->callback([&] {
        Topology topo = load_valid_topology(s_in);
        DrcCatalog catalog = resolve_catalog(catalog_path);
        CandidatePool pool = build_candidate_pool(topo, catalog, s_k, parse_metric(s_metric));
        if (!s_dump_candidates.empty())
            write_text(s_dump_candidates, pool_to_json(pool).dump(2));
        CompiledInstance ci = compile_instance(topo, catalog, pool);
        require_feasible_pool(ci);
        if (!s_dump_program.empty()) export_lp_file(build_stage1(ci), s_dump_program);
        SolveLimits limits;
        limits.time_budget_s = s_time_limit;
        limits.node_budget = s_node_limit;
        limits.require_optimal = s_require_optimal;
        limits.workers = s_workers;
        LexicographicResult result = solve_lexicographic(ci, limits);
        if (result.status == SolveStatus::Infeasible)
            throw CliError{2, "infeasible instance"};
        if (!result.choice.empty()) {
            ValidationReport audit = audit_assignment(ci, result.choice);
            if (!audit.empty())
                throw CliError{1, "internal error: solution failed the post-solve audit"};
        }
        write_text(s_out, solution_to_json(ci, result).dump(2));
        int code = exit_code_for(result.status, s_require_optimal);
        if (code != 0) throw CliError{code, "budget exceeded before proving optimality"};
    });

    // --- oracle ------------------------------------------------------------
    auto* oracle = app.add_subcommand("oracle", "exhaustive reference solve (small instances)");
    std::string o_in, o_out, o_metric = "latency", o_phi_mode = "indicator";
    int o_k = 3;
    double o_guard = 1e6;
    oracle->add_option("--in", o_in, "topology file")->required();
    oracle->add_option("--out", o_out, "result file (stdout when omitted)");
    oracle->add_option("--k", o_k, "routes per RU");
    oracle->add_option("--path-metric", o_metric, "latency|hops");
    oracle->add_option("--guard", o_guard, "refuse above this many combinations");
    oracle->add_option("--phi-mode", o_phi_mode,
                       "indicator|literal objective-term accounting in the summary");
    oracle->callback([&] {
        Topology topo = load_valid_topology(o_in);
        DrcCatalog catalog = resolve_catalog(catalog_path);
        CandidatePool pool = build_candidate_pool(topo, catalog, o_k, parse_metric(o_metric));
        CompiledInstance ci = compile_instance(topo, catalog, pool);
        require_feasible_pool(ci);
        BruteForceResult best = brute_force(ci, o_guard);
        if (!best.feasible) throw CliError{2, "infeasible instance"};
        Json out;
        out["status"] = "optimal";
        out["objective_vector"] = {{"v1", best.objective.v1},
                                   {"v2", best.objective.v2},
                                   {"v3", best.objective.v3}};
        Json assignment = Json::array();
        for (size_t r = 0; r < ci.rus.size(); ++r)
            assignment.push_back(
                {{"ru", ci.rus[r]}, {"drc", ci.candidates[r][best.choice[r]].drc_id}});
        out["assignment"] = std::move(assignment);
        out["phi"] = phi_summary(ci, best.choice, o_phi_mode);
        if (o_out.empty())
            std::cout << out.dump() << "\n";
        else
            write_text(o_out, out.dump(2));
    });

    // --- report ------------------------------------------------------------
    auto* report = app.add_subcommand("report", "evaluation metrics for a solution");
    std::string r_sol, r_in, r_out, r_metric = "latency";
    int r_k = 4;
    double r_reference_latency = -1.0;
    report->add_option("--sol", r_sol, "solution file")->required();
    report->add_option("--in", r_in, "topology file")->required();
    report->add_option("--out", r_out, "output base name; writes <out>.json and <out>.csv")
        ->required();
    report->add_option("--k", r_k, "routes per RU used by the solve");
    report->add_option("--path-metric", r_metric, "latency|hops used by the solve");
    report->add_option("--reference-latency", r_reference_latency,
                       "reference mean link latency in seconds for the latency percentage");
    report->callback([&] {
        Topology topo = load_valid_topology(r_in);
        DrcCatalog catalog = resolve_catalog(catalog_path);
        CandidatePool pool = build_candidate_pool(topo, catalog, r_k, parse_metric(r_metric));
        CompiledInstance ci = compile_instance(topo, catalog, pool);
        Json sol = Json::parse(read_text(r_sol));
        std::vector<int> choice = choice_from_solution(ci, sol);
        std::optional<double> ref;
        if (r_reference_latency > 0.0) ref = r_reference_latency;
        MetricsReport metrics = compute_metrics(ci, choice, ref);
        write_text(r_out + ".json", metrics_to_json(metrics).dump(2));
        write_text(r_out + ".csv", metrics_to_csv(metrics));
    });

    // --- sweep-k -----------------------------------------------------------
    auto* sweep = app.add_subcommand("sweep-k", "stage-1 sensitivity to the route count");
    std::string w_in, w_out, w_metric = "latency";
    int w_max_k = 5;
    double w_time_limit = 3600.0;
    sweep->add_option("--in", w_in, "topology file")->required();
    sweep->add_option("--out", w_out, "output base name; writes <out>.json and <out>.csv")
        ->required();
    sweep->add_option("--max-k", w_max_k, "sweep k = 1..max-k");
    sweep->add_option("--path-metric", w_metric, "latency|hops");
    sweep->add_option("--time-limit", w_time_limit, "seconds per stage per k");
    sweep->callback([&] {
        Topology topo = load_valid_topology(w_in);
        DrcCatalog catalog = resolve_catalog(catalog_path);
        SolveLimits limits;
        limits.time_budget_s = w_time_limit;
        std::vector<KSweepRow> rows =
            k_sweep(topo, catalog, w_max_k, limits, parse_metric(w_metric));
        write_text(w_out + ".json", k_sweep_to_json(rows).dump(2));
        write_text(w_out + ".csv", k_sweep_to_csv(rows));
    });

    // --- export-lp ---------------------------------------------------------
    auto* lp = app.add_subcommand("export-lp", "write one stage program in LP format");
    std::string l_in, l_out, l_metric = "latency";
    int l_k = 4, l_stage = 1;
    double l_time_limit = 3600.0;
    lp->add_option("--in", l_in, "topology file")->required();
    lp->add_option("--out", l_out, "LP file")->required();
    lp->add_option("--k", l_k, "routes per RU");
    lp->add_option("--stage", l_stage, "1|2|3 (later stages solve the earlier ones first)");
    lp->add_option("--path-metric", l_metric, "latency|hops");
    lp->add_option("--time-limit", l_time_limit, "seconds per prerequisite stage");
    lp->callback([&] {
        if (l_stage < 1 || l_stage > 3) throw CliError{1, "stage must be 1, 2 or 3"};
        Topology topo = load_valid_topology(l_in);
        DrcCatalog catalog = resolve_catalog(catalog_path);
        CandidatePool pool = build_candidate_pool(topo, catalog, l_k, parse_metric(l_metric));
        CompiledInstance ci = compile_instance(topo, catalog, pool);
        require_feasible_pool(ci);
        SolveLimits limits;
        limits.time_budget_s = l_time_limit;
        if (l_stage == 1) {
            export_lp_file(build_stage1(ci), l_out);
            return;
        }
        StageSolution s1 = solve_program(build_stage1(ci), limits);
        if (s1.status == SolveStatus::Infeasible) throw CliError{2, "infeasible instance"};
        if (s1.status != SolveStatus::Optimal)
            throw CliError{3, "stage 1 not solved to optimality within the budget"};
        if (l_stage == 2) {
            export_lp_file(build_stage2(ci, s1.objective), l_out);
            return;
        }
        StageSolution s2 = solve_program(build_stage2(ci, s1.objective), limits);
        if (s2.status != SolveStatus::Optimal)
            throw CliError{3, "stage 2 not solved to optimality within the budget"};
        export_lp_file(build_stage3(ci, s1.objective, s2.objective), l_out);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << Json{{"error", e.what()}}.dump() << "\n";
        return 1;
    } catch (const CliError& e) {
        Json err = e.details;
        err["error"] = e.message;
        std::cerr << err.dump() << "\n";
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << Json{{"error", e.what()}}.dump() << "\n";
        return 1;
    }
    return 0;
}
