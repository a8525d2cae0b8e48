// Exact optimization.  A deterministic depth-first branch-and-bound over
// per-RU candidate choices with capacity propagation and admissible lower
// bounds, plus an exhaustive oracle for small instances and an independent
// post-solve audit.

#pragma once

#include <climits>
#include <vector>

#include "placeran/program.hpp"

namespace placeran {

struct SolveLimits {
    double time_budget_s = 3600.0;
    long long node_budget = LLONG_MAX;
    bool require_optimal = true;
    int workers = 1;  // determinism is only guaranteed single-worker
};

enum class SolveStatus { Optimal, Feasible, Infeasible, BudgetExceeded };
const char* to_string(SolveStatus s);

struct ObjectiveVector {
    long long v1 = 0;  // Phi1 - Phi2
    long long v2 = 0;  // unique DRCs
    long long v3 = 0;  // sum of DRC priorities
    bool operator==(const ObjectiveVector&) const = default;
};

struct StageSolution {
    SolveStatus status = SolveStatus::Infeasible;
    std::vector<int> choice;  // per-RU candidate ordinal; empty when none
    long long objective = 0;  // stage objective of the incumbent
    long long bound = 0;      // proven lower bound on the stage objective
    long long explored_nodes = 0;
    double wall_seconds = 0.0;

    bool has_assignment() const { return !choice.empty(); }
    double gap() const;  // 0 when optimal
};

StageSolution solve_program(const IntegerProgram& program, const SolveLimits& limits);

struct LexicographicResult {
    StageSolution stage1;
    StageSolution stage2;
    StageSolution stage3;
    // Final placement: the stage-3 assignment (or the deepest stage that
    // produced one under budget pressure).
    std::vector<int> choice;
    ObjectiveVector objective;
    SolveStatus status = SolveStatus::Infeasible;
};

LexicographicResult solve_lexicographic(const CompiledInstance& instance,
                                        const SolveLimits& limits);

// Exhaustive enumeration; refuses when the assignment-combination count
// exceeds the guard (throws std::invalid_argument with the product size).
struct BruteForceResult {
    bool feasible = false;
    ObjectiveVector objective;
    std::vector<int> choice;
};
BruteForceResult brute_force(const CompiledInstance& instance,
                             double guard = 1e6);

// Objective evaluation of a complete assignment straight from candidate
// data (no solver state involved).
struct AssignmentValue {
    bool feasible = false;  // link and CR capacities respected
    long long employed_crs = 0;
    long long distinct_pairs = 0;   // (CR, function type) pairs in use
    long long placed_functions = 0;
    long long phi2 = 0;             // placed - distinct pairs
    ObjectiveVector objective;
};
AssignmentValue evaluate_assignment(const CompiledInstance& instance,
                                    const std::vector<int>& choice);

// Independent checker: re-verifies one-candidate-per-RU, link capacities,
// sub-path latency bounds (recomputed from raw link data and host
// positions) and CR capacities.  Empty report = clean.
ValidationReport audit_assignment(const CompiledInstance& instance,
                                  const std::vector<int>& choice);

// Shared capacity tolerance so solver, oracle and audit agree on
// feasibility at the boundary.
inline bool capacity_fits(double load, double capacity) {
    return load <= capacity * (1.0 + 1e-12) + 1e-9;
}

}  // namespace placeran
