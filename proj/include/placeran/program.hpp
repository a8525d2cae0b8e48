// The three staged integer programs over candidate variables.  The ceiling
// terms of the stage-1 and stage-2 objectives are linearized with indicator
// variables: z[c] marks a CR running any virtualized function, y[c,f] marks
// function type f present on CR c, d[r] marks DRC r in use.
//
// The programs carry both the explicit row/column view (for LP export and
// inspection) and a compiled index form of the candidate data that the
// solver operates on.

#pragma once

#include <string>
#include <vector>

#include "placeran/pathgen.hpp"

namespace placeran {

// Candidate data rewritten over dense integer indices.
struct CompiledCandidate {
    int ru = 0;            // index into CompiledInstance::rus
    int ordinal = 0;       // position within the RU's candidate list
    int drc_id = 0;
    int priority = 0;
    int placed_functions = 0;  // virtualized functions this choice puts on CRs
    std::vector<std::pair<int, double>> link_loads;  // (link index, bps)
    std::vector<std::pair<int, double>> cr_loads;    // (CR index, cores)
    std::vector<int> pair_opens;  // (CR, function) pairs used: cr * 7 + (f - 2)
    std::vector<int> cr_opens;    // CR indices hosting at least one function
    const CandidateAssignment* source = nullptr;
};

struct CompiledInstance {
    const Topology* topology = nullptr;
    const DrcCatalog* catalog = nullptr;
    std::vector<NodeId> rus;
    std::vector<NodeId> crs;
    std::vector<int> cr_node_index;        // into topology nodes
    std::vector<double> link_capacity;     // per topology link index
    std::vector<double> cr_capacity;       // per CR index
    std::vector<std::vector<CompiledCandidate>> candidates;  // per RU
    std::vector<int> drc_ids;              // catalog order

    int pair_count() const { return static_cast<int>(crs.size()) * kVirtualizableCount; }
};

// Indexes the pool against the topology.  The pool object must outlive the
// compiled instance (candidates keep pointers into it).
CompiledInstance compile_instance(const Topology& topology, const DrcCatalog& catalog,
                                  const CandidatePool& pool);

// RUs with no admissible candidate; a non-empty result means the instance
// is infeasible before any program is built.
std::vector<NodeId> rus_without_candidates(const CompiledInstance& instance);

// --- explicit program view -------------------------------------------------

enum class VarKind { X, Z, Y, D };

struct Variable {
    std::string name;
    VarKind kind = VarKind::X;
};

enum class RowSense { Le, Ge, Eq };

enum class RowTag { Eq4, Eq5, Eq9, LinkY, LinkZ, LinkD, Eq11, Eq13 };
const char* to_string(RowTag tag);

struct Row {
    RowTag tag;
    std::vector<std::pair<int, double>> terms;  // (variable index, coefficient)
    RowSense sense = RowSense::Le;
    double rhs = 0.0;
};

struct IntegerProgram {
    int stage = 1;
    const CompiledInstance* instance = nullptr;
    std::vector<Variable> variables;
    std::vector<std::pair<int, double>> objective;  // minimized
    double objective_constant = 0.0;
    std::vector<Row> rows;
    // Stage chaining values (meaningful for stages 2 and 3).
    long long v1_star = 0;
    long long v2_star = 0;

    // Variable index helpers; layout is x (all RUs, candidate order), then
    // z, then y, then d (stages 2-3 only).
    int x_index(int ru, int ordinal) const;
    int z_index(int cr) const;
    int y_index(int cr, VnfId f) const;
    int d_index(int drc_pos) const;

    // Internal layout bookkeeping, populated by the builders.
    std::vector<int> x_offsets_;
    int z_base_ = 0, y_base_ = 0, d_base_ = -1;
};

// Throws std::invalid_argument when some RU has no candidate (callers are
// expected to consult rus_without_candidates first and report).
IntegerProgram build_stage1(const CompiledInstance& instance);
IntegerProgram build_stage2(const CompiledInstance& instance, long long v1_star);
IntegerProgram build_stage3(const CompiledInstance& instance, long long v1_star,
                            long long v2_star);

// CPLEX-LP-syntax text for the program; deterministic byte-for-byte.
std::string export_lp(const IntegerProgram& program);
void export_lp_file(const IntegerProgram& program, const std::string& path);

}  // namespace placeran
