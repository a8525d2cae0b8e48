#include <algorithm>

#include "doctest.h"
#include "helpers.hpp"
#include "placeran/solve.hpp"

using namespace placeran;
using namespace placeran::testfix;

namespace {

DrcCatalog catalog_subset(std::initializer_list<int> ids) {
    DrcCatalog full = builtin_default_catalog();
    DrcCatalog out;
    out.vnf_demands = full.vnf_demands;
    for (int id : ids) out.drcs.push_back(*full.find(id));
    return out;
}

struct Compiled {
    DrcCatalog catalog;
    Topology topology;
    CandidatePool pool;
    CompiledInstance instance;
};

Compiled compile(Topology topo, DrcCatalog cat, int k = 3) {
    Compiled c{std::move(cat), std::move(topo), {}, {}};
    c.pool = build_candidate_pool(c.topology, c.catalog, k);
    c.instance = compile_instance(c.topology, c.catalog, c.pool);
    return c;
}

Topology scale_capacities(const Topology& topo, double factor) {
    std::vector<Node> nodes = topo.nodes();
    std::vector<Link> links = topo.links();
    for (Node& n : nodes)
        if (n.proc_capacity) n.proc_capacity = *n.proc_capacity * factor;
    for (Link& l : links) l.capacity_bps *= factor;
    return Topology(std::move(nodes), std::move(links), topo.metadata());
}

}  // namespace

TEST_CASE("forced single-candidate instance solves without search") {
    Compiled c = compile(ru_site_topology(), catalog_subset({19}));
    IntegerProgram p = build_stage1(c.instance);
    StageSolution s = solve_program(p, SolveLimits{});
    CHECK(s.status == SolveStatus::Optimal);
    CHECK(s.objective == 1);
    CHECK(s.bound == 1);
    CHECK(s.gap() == 0.0);
    CHECK(s.explored_nodes <= 4);
    REQUIRE(s.choice.size() == 1);
}

TEST_CASE("two-unit toy matches the hand enumeration") {
    Compiled c = compile(two_ru_shared_cr(), builtin_default_catalog());
    IntegerProgram p = build_stage1(c.instance);
    StageSolution s = solve_program(p, SolveLimits{});
    CHECK(s.status == SolveStatus::Optimal);
    CHECK(s.objective == -6);
    AssignmentValue val = evaluate_assignment(c.instance, s.choice);
    CHECK(val.feasible);
    CHECK(val.objective.v1 == -6);
}

TEST_CASE("exceeded computing capacity is reported infeasible") {
    // Each chain needs 8 cores on the only computing resource; 10 fits one
    // radio unit but not two.
    Compiled c = compile(two_ru_shared_cr(10.0), builtin_default_catalog());
    REQUIRE(!c.instance.candidates[0].empty());
    IntegerProgram p = build_stage1(c.instance);
    StageSolution s = solve_program(p, SolveLimits{});
    CHECK(s.status == SolveStatus::Infeasible);
    CHECK(!brute_force(c.instance).feasible);
}

TEST_CASE("exhaustive search refuses oversized instances") {
    Compiled c = compile(three_cr_route(), builtin_default_catalog());
    REQUIRE(c.instance.candidates[0].size() > 1);
    CHECK_THROWS_AS(brute_force(c.instance, 1.0), std::invalid_argument);
}

TEST_CASE("an instance without radio-unit lists is vacuously optimal") {
    CompiledInstance empty;
    BruteForceResult r = brute_force(empty);
    CHECK(r.feasible);
    CHECK(r.objective == ObjectiveVector{});
    CHECK(r.choice.empty());
}

TEST_CASE("node budget pressure is reported honestly") {
    Compiled c = compile(stage2_tie_topology(), builtin_default_catalog());
    IntegerProgram p = build_stage1(c.instance);
    SolveLimits limits;
    limits.node_budget = 1;
    StageSolution s = solve_program(p, limits);
    CHECK(s.status == SolveStatus::BudgetExceeded);
    StageSolution full = solve_program(p, SolveLimits{});
    REQUIRE(full.status == SolveStatus::Optimal);
    CHECK(s.bound <= full.objective);
}

TEST_CASE("lexicographic solve equals the exhaustive oracle on seeded instances") {
    DrcCatalog cat = builtin_default_catalog();
    int compared = 0, infeasible = 0;
    for (std::uint64_t seed = 1; compared < 60 && seed < 400; ++seed) {
        Topology topo = random_tiny_topology(seed);
        REQUIRE(validate_topology(topo).empty());
        CandidatePool pool = build_candidate_pool(topo, cat, 3);
        CompiledInstance inst = compile_instance(topo, cat, pool);
        if (combination_count(inst) > 1e6) continue;
        CAPTURE(seed);

        if (!rus_without_candidates(inst).empty()) {
            CHECK(!brute_force(inst).feasible);
            ++infeasible;
            continue;
        }
        BruteForceResult oracle = brute_force(inst);
        LexicographicResult lex = solve_lexicographic(inst, SolveLimits{});
        if (!oracle.feasible) {
            CHECK(lex.status == SolveStatus::Infeasible);
            ++infeasible;
            continue;
        }
        REQUIRE(lex.status == SolveStatus::Optimal);
        CHECK(lex.objective == oracle.objective);

        AssignmentValue val = evaluate_assignment(inst, lex.choice);
        CHECK(val.feasible);
        CHECK(val.objective == oracle.objective);
        CHECK(audit_assignment(inst, lex.choice).empty());
        ++compared;
    }
    CHECK(compared == 60);
}

TEST_CASE("stage chaining preserves the earlier objectives") {
    DrcCatalog cat = builtin_default_catalog();
    int checked = 0;
    for (std::uint64_t seed = 1; checked < 25 && seed < 200; ++seed) {
        Topology topo = random_tiny_topology(seed);
        CandidatePool pool = build_candidate_pool(topo, cat, 2);
        CompiledInstance inst = compile_instance(topo, cat, pool);
        if (!rus_without_candidates(inst).empty()) continue;
        LexicographicResult lex = solve_lexicographic(inst, SolveLimits{});
        if (lex.status != SolveStatus::Optimal) continue;

        AssignmentValue v2 = evaluate_assignment(inst, lex.stage2.choice);
        AssignmentValue v3 = evaluate_assignment(inst, lex.stage3.choice);
        CHECK(v2.feasible);
        CHECK(v3.feasible);
        CHECK(v2.objective.v1 == lex.stage1.objective);
        CHECK(v3.objective.v1 == lex.stage1.objective);
        CHECK(v3.objective.v2 == lex.stage2.objective);
        CHECK(v3.objective.v3 == lex.stage3.objective);
        CHECK(lex.objective == v3.objective);
        ++checked;
    }
    CHECK(checked == 25);
}

TEST_CASE("more routes never worsen the first-stage optimum") {
    DrcCatalog cat = builtin_default_catalog();
    int checked = 0;
    for (std::uint64_t seed = 1; checked < 25 && seed < 200; ++seed) {
        Topology topo = random_tiny_topology(seed);
        CandidatePool p1 = build_candidate_pool(topo, cat, 1);
        CandidatePool p2 = build_candidate_pool(topo, cat, 2);
        CompiledInstance i1 = compile_instance(topo, cat, p1);
        CompiledInstance i2 = compile_instance(topo, cat, p2);
        if (!rus_without_candidates(i1).empty()) continue;
        REQUIRE(rus_without_candidates(i2).empty());
        StageSolution s1 = solve_program(build_stage1(i1), SolveLimits{});
        StageSolution s2 = solve_program(build_stage1(i2), SolveLimits{});
        if (s1.status != SolveStatus::Optimal) continue;
        REQUIRE(s2.status == SolveStatus::Optimal);
        CHECK(s2.objective <= s1.objective);
        ++checked;
    }
    CHECK(checked == 25);
}

TEST_CASE("extra capacity never worsens the first-stage optimum") {
    DrcCatalog cat = builtin_default_catalog();
    int checked = 0;
    for (std::uint64_t seed = 1; checked < 25 && seed < 200; ++seed) {
        Topology topo = random_tiny_topology(seed);
        Topology bigger = scale_capacities(topo, 2.0);
        CandidatePool pool = build_candidate_pool(topo, cat, 2);
        CandidatePool pool_big = build_candidate_pool(bigger, cat, 2);
        CompiledInstance inst = compile_instance(topo, cat, pool);
        CompiledInstance inst_big = compile_instance(bigger, cat, pool_big);
        if (!rus_without_candidates(inst).empty()) continue;
        StageSolution base = solve_program(build_stage1(inst), SolveLimits{});
        if (base.status != SolveStatus::Optimal) continue;
        StageSolution roomy = solve_program(build_stage1(inst_big), SolveLimits{});
        REQUIRE(roomy.status == SolveStatus::Optimal);
        CHECK(roomy.objective <= base.objective);
        ++checked;
    }
    CHECK(checked == 25);
}

TEST_CASE("repeated solves are bit-for-bit identical") {
    Compiled c = compile(stage2_tie_topology(), builtin_default_catalog());
    LexicographicResult a = solve_lexicographic(c.instance, SolveLimits{});
    LexicographicResult b = solve_lexicographic(c.instance, SolveLimits{});
    CHECK(a.status == b.status);
    CHECK(a.objective == b.objective);
    CHECK(a.choice == b.choice);
    for (auto [x, y] : {std::pair(&a.stage1, &b.stage1), std::pair(&a.stage2, &b.stage2),
                        std::pair(&a.stage3, &b.stage3)}) {
        CHECK(x->objective == y->objective);
        CHECK(x->bound == y->bound);
        CHECK(x->explored_nodes == y->explored_nodes);
        CHECK(x->choice == y->choice);
    }
}

TEST_CASE("the audit flags corrupted assignments") {
    Compiled c = compile(two_ru_shared_cr(10.0), builtin_default_catalog());
    // Both units on the 10-core resource exceed its capacity.
    std::vector<int> overload = {0, 0};
    ValidationReport report = audit_assignment(c.instance, overload);
    CHECK(!report.empty());
    bool capacity_flagged = std::any_of(report.begin(), report.end(), [](const Violation& v) {
        return v.code.find("eq9") != std::string::npos;
    });
    CHECK(capacity_flagged);

    std::vector<int> short_choice = {0};
    CHECK(!audit_assignment(c.instance, short_choice).empty());
}

TEST_CASE("the audit passes optimal placements") {
    for (std::uint64_t seed : {3u, 7u, 11u}) {
        Topology topo = random_tiny_topology(seed);
        DrcCatalog cat = builtin_default_catalog();
        CandidatePool pool = build_candidate_pool(topo, cat, 2);
        CompiledInstance inst = compile_instance(topo, cat, pool);
        if (!rus_without_candidates(inst).empty()) continue;
        LexicographicResult lex = solve_lexicographic(inst, SolveLimits{});
        if (lex.status != SolveStatus::Optimal) continue;
        CHECK(audit_assignment(inst, lex.choice).empty());
    }
}
