#include "placeran/program.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "placeran/json_io.hpp"

namespace placeran {

CompiledInstance compile_instance(const Topology& topology, const DrcCatalog& catalog,
                                  const CandidatePool& pool) {
    CompiledInstance ci;
    ci.topology = &topology;
    ci.catalog = &catalog;
    ci.rus = pool.rus;
    for (const Drc& d : catalog.drcs) ci.drc_ids.push_back(d.id);

    std::map<NodeId, int> cr_index;
    for (size_t i = 0; i < topology.nodes().size(); ++i) {
        const Node& n = topology.nodes()[i];
        if (n.kind != NodeKind::ComputingResource) continue;
        cr_index[n.id] = static_cast<int>(ci.crs.size());
        ci.crs.push_back(n.id);
        ci.cr_node_index.push_back(static_cast<int>(i));
        ci.cr_capacity.push_back(n.proc_capacity.value_or(0.0));
    }
    for (const Link& l : topology.links()) ci.link_capacity.push_back(l.capacity_bps);

    ci.candidates.resize(pool.rus.size());
    for (size_t r = 0; r < pool.rus.size(); ++r) {
        for (size_t a = 0; a < pool.per_ru[r].size(); ++a) {
            const CandidateAssignment& src = pool.per_ru[r][a];
            CompiledCandidate cc;
            cc.ru = static_cast<int>(r);
            cc.ordinal = static_cast<int>(a);
            cc.drc_id = src.drc_id;
            const Drc* drc = catalog.find(src.drc_id);
            cc.priority = drc ? drc->priority : 0;
            cc.source = &src;
            for (const auto& [lid, bps] : src.link_loads)
                cc.link_loads.emplace_back(topology.link_index(lid), bps);
            std::sort(cc.link_loads.begin(), cc.link_loads.end());

            // Which virtualized functions land on which CR.
            std::map<int, std::vector<VnfId>> per_cr;
            if (drc) {
                auto place = [&](const std::optional<NodeId>& host, const std::vector<VnfId>& fs) {
                    if (!host || fs.empty()) return;
                    auto& v = per_cr[cr_index.at(*host)];
                    v.insert(v.end(), fs.begin(), fs.end());
                };
                place(src.cu_host, drc->cu_functions);
                if (drc->set_label != DrcSetLabel::CRan)  // C-RAN: du mirrors cu
                    place(src.du_host, drc->du_functions);
                const Node* ru_node = topology.find_node(src.ru);
                if (ru_node && ru_node->attached_cr) {
                    auto site = drc->ru_colocated_functions();
                    if (!site.empty()) {
                        auto& v = per_cr[cr_index.at(*ru_node->attached_cr)];
                        v.insert(v.end(), site.begin(), site.end());
                    }
                }
            }
            for (auto& [cr, fs] : per_cr) {
                cc.cr_opens.push_back(cr);
                double demand = 0.0;
                for (VnfId f : fs) {
                    cc.pair_opens.push_back(cr * kVirtualizableCount + (f - 2));
                    demand += catalog.demand(f);
                    ++cc.placed_functions;
                }
                cc.cr_loads.emplace_back(cr, demand);
            }
            std::sort(cc.pair_opens.begin(), cc.pair_opens.end());
            ci.candidates[r].push_back(std::move(cc));
        }
    }
    return ci;
}

std::vector<NodeId> rus_without_candidates(const CompiledInstance& instance) {
    std::vector<NodeId> out;
    for (size_t r = 0; r < instance.rus.size(); ++r)
        if (instance.candidates[r].empty()) out.push_back(instance.rus[r]);
    return out;
}

const char* to_string(RowTag tag) {
    switch (tag) {
        case RowTag::Eq4: return "Eq4";
        case RowTag::Eq5: return "Eq5";
        case RowTag::Eq9: return "Eq9";
        case RowTag::LinkY: return "link-y";
        case RowTag::LinkZ: return "link-z";
        case RowTag::LinkD: return "link-d";
        case RowTag::Eq11: return "Eq11";
        case RowTag::Eq13: return "Eq13";
    }
    return "?";
}

int IntegerProgram::x_index(int ru, int ordinal) const { return x_offsets_[ru] + ordinal; }
int IntegerProgram::z_index(int cr) const { return z_base_ + cr; }
int IntegerProgram::y_index(int cr, VnfId f) const {
    return y_base_ + cr * kVirtualizableCount + (f - 2);
}
int IntegerProgram::d_index(int drc_pos) const { return d_base_ + drc_pos; }

namespace {

void add_shared_structure(IntegerProgram& p, const CompiledInstance& ci, bool with_d) {
    auto missing = rus_without_candidates(ci);
    if (!missing.empty())
        throw std::invalid_argument("instance infeasible: RU " + missing.front() +
                                    " has no candidates");

    const int n_ru = static_cast<int>(ci.rus.size());
    const int n_cr = static_cast<int>(ci.crs.size());

    p.instance = &ci;
    p.x_offsets_.resize(n_ru);
    int next = 0;
    for (int r = 0; r < n_ru; ++r) {
        p.x_offsets_[r] = next;
        for (const CompiledCandidate& c : ci.candidates[r]) {
            p.variables.push_back({"x_" + std::to_string(r) + "_" + std::to_string(c.ordinal),
                                   VarKind::X});
            ++next;
        }
    }
    p.z_base_ = next;
    for (int c = 0; c < n_cr; ++c) p.variables.push_back({"z_" + std::to_string(c), VarKind::Z});
    next += n_cr;
    p.y_base_ = next;
    for (int c = 0; c < n_cr; ++c)
        for (VnfId f = 2; f <= kLastVnf; ++f)
            p.variables.push_back({"y_" + std::to_string(c) + "_" + std::to_string(f), VarKind::Y});
    next += n_cr * kVirtualizableCount;
    if (with_d) {
        p.d_base_ = next;
        for (int d : ci.drc_ids)
            p.variables.push_back({"d_" + std::to_string(d), VarKind::D});
    }

    // Eq. 4: exactly one (path, DRC) pair per RU.
    for (int r = 0; r < n_ru; ++r) {
        Row row;
        row.tag = RowTag::Eq4;
        for (const CompiledCandidate& c : ci.candidates[r])
            row.terms.emplace_back(p.x_index(r, c.ordinal), 1.0);
        row.sense = RowSense::Eq;
        row.rhs = 1.0;
        p.rows.push_back(std::move(row));
    }

    // Eq. 5: link capacities.  Rows only for links that some candidate loads.
    std::map<int, Row> link_rows;
    for (int r = 0; r < n_ru; ++r)
        for (const CompiledCandidate& c : ci.candidates[r])
            for (const auto& [li, bps] : c.link_loads) {
                Row& row = link_rows[li];
                row.tag = RowTag::Eq5;
                row.terms.emplace_back(p.x_index(r, c.ordinal), bps);
            }
    for (auto& [li, row] : link_rows) {
        row.sense = RowSense::Le;
        row.rhs = ci.link_capacity[li];
        p.rows.push_back(std::move(row));
    }
    // Eqs. 6-8 are enforced by the candidate prefilter: every candidate's
    // sub-path latencies are constants checked at enumeration time.

    // Eq. 9: CR processing capacities.
    std::map<int, Row> cr_rows;
    for (int r = 0; r < n_ru; ++r)
        for (const CompiledCandidate& c : ci.candidates[r])
            for (const auto& [cr, cores] : c.cr_loads) {
                Row& row = cr_rows[cr];
                row.tag = RowTag::Eq9;
                row.terms.emplace_back(p.x_index(r, c.ordinal), cores);
            }
    for (auto& [cr, row] : cr_rows) {
        row.sense = RowSense::Le;
        row.rhs = ci.cr_capacity[cr];
        p.rows.push_back(std::move(row));
    }

    // Indicator linking.  y_{c,f} >= x for every candidate placing f on c,
    // and n_{c,f} <= |B| y_{c,f}; z_c >= y_{c,f} and sum_f y <= |F'| z_c.
    std::map<int, std::vector<int>> pair_vars;  // pair id -> x indices
    for (int r = 0; r < n_ru; ++r)
        for (const CompiledCandidate& c : ci.candidates[r])
            for (int pair : c.pair_opens)
                pair_vars[pair].push_back(p.x_index(r, c.ordinal));
    for (const auto& [pair, xs] : pair_vars) {
        int cr = pair / kVirtualizableCount;
        VnfId f = pair % kVirtualizableCount + 2;
        int y = p.y_index(cr, f);
        for (int x : xs) {
            Row row;
            row.tag = RowTag::LinkY;
            row.terms = {{y, 1.0}, {x, -1.0}};
            row.sense = RowSense::Ge;
            row.rhs = 0.0;
            p.rows.push_back(std::move(row));
        }
        Row cap;  // n_{c,f} <= |B| y
        cap.tag = RowTag::LinkY;
        for (int x : xs) cap.terms.emplace_back(x, 1.0);
        cap.terms.emplace_back(y, -static_cast<double>(n_ru));
        cap.sense = RowSense::Le;
        cap.rhs = 0.0;
        p.rows.push_back(std::move(cap));
    }
    for (int c = 0; c < n_cr; ++c) {
        Row sum;  // sum_f y_{c,f} <= |F'| z_c
        sum.tag = RowTag::LinkZ;
        for (VnfId f = 2; f <= kLastVnf; ++f) {
            Row row;
            row.tag = RowTag::LinkZ;
            row.terms = {{p.z_index(c), 1.0}, {p.y_index(c, f), -1.0}};
            row.sense = RowSense::Ge;
            row.rhs = 0.0;
            p.rows.push_back(std::move(row));
            sum.terms.emplace_back(p.y_index(c, f), 1.0);
        }
        sum.terms.emplace_back(p.z_index(c), -static_cast<double>(kVirtualizableCount));
        sum.sense = RowSense::Le;
        sum.rhs = 0.0;
        p.rows.push_back(std::move(sum));
    }

    if (with_d) {
        // d_r >= x for each candidate using DRC r.
        std::map<int, int> drc_pos;
        for (size_t i = 0; i < ci.drc_ids.size(); ++i) drc_pos[ci.drc_ids[i]] = static_cast<int>(i);
        for (int r = 0; r < n_ru; ++r)
            for (const CompiledCandidate& c : ci.candidates[r]) {
                Row row;
                row.tag = RowTag::LinkD;
                row.terms = {{p.d_index(drc_pos.at(c.drc_id)), 1.0},
                             {p.x_index(r, c.ordinal), -1.0}};
                row.sense = RowSense::Ge;
                row.rhs = 0.0;
                p.rows.push_back(std::move(row));
            }
    }
}

// Phi1 - Phi2 as a linear expression: sum_c z_c + sum_{c,f} y_{c,f} minus
// the per-candidate count of placed functions (the aggregation identity
// Phi2 = placed - distinct pairs).
void add_stage1_value_terms(std::vector<std::pair<int, double>>& terms, const IntegerProgram& p,
                            const CompiledInstance& ci) {
    for (int c = 0; c < static_cast<int>(ci.crs.size()); ++c) {
        terms.emplace_back(p.z_index(c), 1.0);
        for (VnfId f = 2; f <= kLastVnf; ++f) terms.emplace_back(p.y_index(c, f), 1.0);
    }
    for (int r = 0; r < static_cast<int>(ci.rus.size()); ++r)
        for (const CompiledCandidate& c : ci.candidates[r])
            if (c.placed_functions != 0)
                terms.emplace_back(p.x_index(r, c.ordinal),
                                   -static_cast<double>(c.placed_functions));
}

}  // namespace

IntegerProgram build_stage1(const CompiledInstance& instance) {
    IntegerProgram p;
    p.stage = 1;
    add_shared_structure(p, instance, /*with_d=*/false);
    add_stage1_value_terms(p.objective, p, instance);
    return p;
}

IntegerProgram build_stage2(const CompiledInstance& instance, long long v1_star) {
    IntegerProgram p;
    p.stage = 2;
    p.v1_star = v1_star;
    add_shared_structure(p, instance, /*with_d=*/true);
    for (size_t i = 0; i < instance.drc_ids.size(); ++i)
        p.objective.emplace_back(p.d_index(static_cast<int>(i)), 1.0);
    Row eq11;
    eq11.tag = RowTag::Eq11;
    add_stage1_value_terms(eq11.terms, p, instance);
    eq11.sense = RowSense::Eq;
    eq11.rhs = static_cast<double>(v1_star);
    p.rows.push_back(std::move(eq11));
    return p;
}

IntegerProgram build_stage3(const CompiledInstance& instance, long long v1_star,
                            long long v2_star) {
    IntegerProgram p;
    p.stage = 3;
    p.v1_star = v1_star;
    p.v2_star = v2_star;
    add_shared_structure(p, instance, /*with_d=*/true);
    for (int r = 0; r < static_cast<int>(instance.rus.size()); ++r)
        for (const CompiledCandidate& c : instance.candidates[r])
            p.objective.emplace_back(p.x_index(r, c.ordinal), static_cast<double>(c.priority));
    Row eq11;
    eq11.tag = RowTag::Eq11;
    add_stage1_value_terms(eq11.terms, p, instance);
    eq11.sense = RowSense::Eq;
    eq11.rhs = static_cast<double>(v1_star);
    p.rows.push_back(std::move(eq11));
    Row eq13;
    eq13.tag = RowTag::Eq13;
    for (size_t i = 0; i < instance.drc_ids.size(); ++i)
        eq13.terms.emplace_back(p.d_index(static_cast<int>(i)), 1.0);
    eq13.sense = RowSense::Eq;
    eq13.rhs = static_cast<double>(v2_star);
    p.rows.push_back(std::move(eq13));
    return p;
}

namespace {

std::string format_coeff(double v) {
    // LP numbers: integral values without a fractional part, otherwise
    // enough digits to round-trip.
    if (v == static_cast<long long>(v) && std::abs(v) < 1e15) {
        std::ostringstream os;
        os << static_cast<long long>(v);
        return os.str();
    }
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void write_expression(std::ostringstream& os, const IntegerProgram& p,
                      const std::vector<std::pair<int, double>>& terms) {
    // Accumulate repeated variables first so the output is canonical.
    std::map<int, double> acc;
    for (const auto& [var, coeff] : terms) acc[var] += coeff;
    bool first = true;
    for (const auto& [var, coeff] : acc) {
        if (coeff == 0.0) continue;
        if (first) {
            if (coeff < 0) os << "- ";
            first = false;
        } else {
            os << (coeff < 0 ? " - " : " + ");
        }
        double mag = std::abs(coeff);
        if (mag != 1.0) os << format_coeff(mag) << " ";
        os << p.variables[var].name;
    }
    if (first) os << "0 " << p.variables.front().name;
}

}  // namespace

std::string export_lp(const IntegerProgram& p) {
    std::ostringstream os;
    os << "\\ stage " << p.stage << " program\n";
    os << "Minimize\n obj: ";
    write_expression(os, p, p.objective);
    os << "\nSubject To\n";
    int counter = 0;
    for (const Row& row : p.rows) {
        std::string tag = to_string(row.tag);
        std::replace(tag.begin(), tag.end(), '-', '_');
        os << " c" << counter++ << "_" << tag << ": ";
        write_expression(os, p, row.terms);
        switch (row.sense) {
            case RowSense::Le: os << " <= "; break;
            case RowSense::Ge: os << " >= "; break;
            case RowSense::Eq: os << " = "; break;
        }
        os << format_coeff(row.rhs) << "\n";
    }
    os << "Binary\n";
    for (const Variable& v : p.variables) os << " " << v.name << "\n";
    os << "End\n";
    return os.str();
}

void export_lp_file(const IntegerProgram& program, const std::string& path) {
    write_text(path, export_lp(program));
}

}  // namespace placeran
