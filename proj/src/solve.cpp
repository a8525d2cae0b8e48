#include "placeran/solve.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <map>
#include <set>
#include <tuple>
#include <stdexcept>

namespace placeran {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Feasible: return "feasible";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::BudgetExceeded: return "budget-exceeded";
    }
    return "?";
}

double StageSolution::gap() const {
    if (status == SolveStatus::Optimal) return 0.0;
    if (!has_assignment()) return std::numeric_limits<double>::infinity();
    double denom = std::max(1.0, std::abs(static_cast<double>(objective)));
    return static_cast<double>(objective - bound) / denom;
}

namespace {

// One candidate in solver form: capacity footprint plus the set of "items"
// it opens.  Items are (CR, function) pairs first, CR-employed flags after.
struct SolverCand {
    int ordinal = 0;
    int drc_pos = 0;
    int priority = 0;
    int placed = 0;
    std::vector<std::pair<int, double>> link_loads;
    std::vector<std::pair<int, double>> cr_loads;
    std::vector<int> items;
};

class BranchAndBound {
public:
    BranchAndBound(const IntegerProgram& program, const SolveLimits& limits)
        : ci_(*program.instance),
          stage_(program.stage),
          v1_star_(program.v1_star),
          v2_star_(program.v2_star),
          limits_(limits) {
        n_ru_ = static_cast<int>(ci_.rus.size());
        n_cr_ = static_cast<int>(ci_.crs.size());
        n_item_ = ci_.pair_count() + n_cr_;
        n_drc_ = static_cast<int>(ci_.drc_ids.size());

        std::map<int, int> drc_pos;
        for (int i = 0; i < n_drc_; ++i) drc_pos[ci_.drc_ids[i]] = i;

        // A link row is redundant when even the per-RU worst cases cannot
        // add up to its capacity; dropping those loads lets candidates that
        // only differ in routing collapse into one.
        std::vector<double> worst(ci_.link_capacity.size(), 0.0);
        for (int r = 0; r < n_ru_; ++r) {
            std::map<int, double> ru_max;
            for (const CompiledCandidate& cc : ci_.candidates[r])
                for (const auto& [li, bps] : cc.link_loads)
                    ru_max[li] = std::max(ru_max[li], bps);
            for (const auto& [li, bps] : ru_max) worst[li] += bps;
        }
        std::vector<char> binding(ci_.link_capacity.size(), 0);
        for (size_t li = 0; li < worst.size(); ++li)
            if (!capacity_fits(worst[li], ci_.link_capacity[li])) binding[li] = 1;

        cands_.resize(n_ru_);
        link_users_.resize(ci_.link_capacity.size());
        cr_users_.resize(n_cr_);
        for (int r = 0; r < n_ru_; ++r) {
            // Deduplicate candidates that the current stage cannot tell
            // apart; the representative is the earliest ordinal.
            std::set<std::tuple<int, std::vector<int>, std::vector<std::pair<int, double>>,
                                std::vector<std::pair<int, double>>>>
                seen;
            for (const CompiledCandidate& cc : ci_.candidates[r]) {
                SolverCand sc;
                sc.ordinal = cc.ordinal;
                sc.drc_pos = drc_pos.at(cc.drc_id);
                sc.priority = cc.priority;
                sc.placed = cc.placed_functions;
                for (const auto& [li, bps] : cc.link_loads)
                    if (binding[li]) sc.link_loads.emplace_back(li, bps);
                sc.cr_loads = cc.cr_loads;
                sc.items = cc.pair_opens;
                for (int cr : cc.cr_opens) sc.items.push_back(ci_.pair_count() + cr);
                std::sort(sc.items.begin(), sc.items.end());
                int drc_key = stage_ == 1 ? 0 : sc.drc_pos;
                if (!seen.emplace(drc_key, sc.items, sc.cr_loads, sc.link_loads).second)
                    continue;
                int idx = static_cast<int>(cands_[r].size());
                for (const auto& [li, bps] : sc.link_loads) link_users_[li].emplace_back(r, idx);
                for (const auto& [cr, g] : sc.cr_loads) cr_users_[cr].emplace_back(r, idx);
                cands_[r].push_back(std::move(sc));
            }
        }
    }

    StageSolution run() {
        auto t0 = std::chrono::steady_clock::now();
        start_ = t0;

        rem_link_ = ci_.link_capacity;
        rem_cr_ = ci_.cr_capacity;
        item_open_.assign(n_item_, 0);
        alive_.resize(n_ru_);
        alive_count_.resize(n_ru_);
        for (int r = 0; r < n_ru_; ++r) {
            alive_[r].assign(cands_[r].size(), 1);
            alive_count_[r] = static_cast<int>(cands_[r].size());
        }
        decided_.assign(n_ru_, -1);
        undecided_ = n_ru_;
        drc_use_.assign(n_drc_, 0);
        item_seen_stamp_.assign(n_item_, 0);
        cr_claim_stamp_.assign(n_cr_, 0);
        hit_stamp_.assign(n_cr_, 0);
        hit_count_.assign(n_cr_, 0);
        q_count_.assign(n_item_, 0);
        q_stamp_.assign(n_item_, 0);
        dmin_.assign(n_item_, 0.0);
        inv_cost_.assign(n_item_, 0.0);
        touched_items_.reserve(n_item_);

        // Initial propagation: drop candidates that never fit.
        bool root_dead = false;
        for (int r = 0; r < n_ru_ && !root_dead; ++r) {
            for (size_t a = 0; a < cands_[r].size(); ++a)
                if (!cand_fits(cands_[r][a])) {
                    alive_[r][a] = 0;
                    --alive_count_[r];
                }
            if (alive_count_[r] == 0) root_dead = true;
        }

        abort_bound_ = std::numeric_limits<long long>::max();
        if (!root_dead) {
            dual_ascent();
            if (stage_ == 1) seed_incumbent();
            dfs(std::numeric_limits<long long>::min());
        }

        StageSolution out;
        out.explored_nodes = nodes_;
        out.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!aborted_) {
            if (have_incumbent_) {
                out.status = SolveStatus::Optimal;
                out.choice = best_choice_;
                out.objective = best_obj_;
                out.bound = best_obj_;
            } else {
                out.status = SolveStatus::Infeasible;
            }
        } else {
            out.status = have_incumbent_ && !limits_.require_optimal ? SolveStatus::Feasible
                                                                     : SolveStatus::BudgetExceeded;
            if (have_incumbent_) {
                out.choice = best_choice_;
                out.objective = best_obj_;
            }
            out.bound = std::min(abort_bound_, have_incumbent_
                                                   ? best_obj_
                                                   : std::numeric_limits<long long>::max());
        }
        return out;
    }

private:
    bool cand_fits(const SolverCand& c) const {
        for (const auto& [li, bps] : c.link_loads)
            if (!capacity_fits(bps, rem_link_[li])) return false;
        for (const auto& [cr, g] : c.cr_loads)
            if (!capacity_fits(g, rem_cr_[cr])) return false;
        return true;
    }

    long long committed_v1() const { return opened_items_ - placed_sum_; }

    double priced_cost(int r, const SolverCand& c) const {
        double cost = -static_cast<double>(c.placed);
        for (int item : c.items)
            if (!item_open_[item]) cost += share_[r][item];
        return cost;
    }

    // Root-level coordinate ascent on the dual of the grouping relaxation:
    // every item carries one unit of price, split across the RUs able to
    // open it; each RU's bound contribution is its cheapest priced
    // candidate.  The resulting share table stays valid at every node
    // because alive sets only shrink and open items stop charging.
    void dual_ascent() {
        share_.assign(n_ru_, std::vector<double>(n_item_, 0.0));
        std::vector<std::vector<int>> item_rus(n_item_);
        {
            std::vector<int> last(n_item_, -1);
            for (int r = 0; r < n_ru_; ++r)
                for (size_t a = 0; a < cands_[r].size(); ++a) {
                    if (!alive_[r][a]) continue;
                    for (int item : cands_[r][a].items)
                        if (last[item] != r) {
                            last[item] = r;
                            item_rus[item].push_back(r);
                        }
                }
            for (int item = 0; item < n_item_; ++item)
                if (!item_rus[item].empty()) {
                    double s = 1.0 / static_cast<double>(item_rus[item].size());
                    for (int r : item_rus[item]) share_[r][item] = s;
                }
        }
        // Sweep until the dual value stops improving; the table is computed
        // once, so convergence here is cheap relative to the search it
        // sharpens.
        constexpr int kMaxSweeps = 256;
        double prev_value = -std::numeric_limits<double>::infinity();
        std::vector<double> caps;
        for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
            for (int item = 0; item < n_item_; ++item) {
                const std::vector<int>& rus = item_rus[item];
                if (rus.empty()) continue;
                caps.clear();
                double total = 0.0;
                for (int r : rus) {
                    double with = std::numeric_limits<double>::infinity();
                    double without = std::numeric_limits<double>::infinity();
                    for (size_t a = 0; a < cands_[r].size(); ++a) {
                        if (!alive_[r][a]) continue;
                        const SolverCand& c = cands_[r][a];
                        double cost = priced_cost(r, c);
                        bool has = false;
                        for (int o : c.items)
                            if (o == item) has = true;
                        if (has)
                            with = std::min(with, cost - share_[r][item]);
                        else
                            without = std::min(without, cost);
                    }
                    double cap;
                    if (!std::isfinite(with))
                        cap = 0.0;
                    else if (!std::isfinite(without))
                        cap = 1.0;
                    else
                        cap = std::clamp(without - with, 0.0, 1.0);
                    caps.push_back(cap);
                    total += cap;
                }
                double scale = total > 1.0 ? 1.0 / total : 1.0;
                for (size_t i = 0; i < rus.size(); ++i)
                    share_[rus[i]][item] = caps[i] * scale;
            }
            double value = 0.0;
            for (int r = 0; r < n_ru_; ++r) {
                double best = std::numeric_limits<double>::infinity();
                for (size_t a = 0; a < cands_[r].size(); ++a)
                    if (alive_[r][a]) best = std::min(best, priced_cost(r, cands_[r][a]));
                value += best;
            }
            if (value <= prev_value + 1e-9) break;
            prev_value = value;
        }
    }

    // Count undecided RUs that are guaranteed to employ a CR nobody else
    // has.  For each RU a small hitting set of CRs is built greedily so that
    // every alive candidate touches the set with a non-employed CR; RUs
    // whose hitting sets are pairwise disjoint then each force a distinct
    // new employed CR in any completion.
    long long forced_new_crs() {
        ++claim_pass_;
        long long extra = 0;
        for (int r = 0; r < n_ru_; ++r) {
            if (decided_[r] >= 0) continue;
            // Collect the alive candidates still needing a hit; a candidate
            // whose hosts are all employed means the RU may add no new CR.
            scratch_cands_.clear();
            bool reuse_possible = false;
            for (size_t a = 0; a < cands_[r].size() && !reuse_possible; ++a) {
                if (!alive_[r][a]) continue;
                bool all_employed = true;
                for (const auto& [cr, g] : cands_[r][a].cr_loads)
                    if (!item_open_[ci_.pair_count() + cr]) all_employed = false;
                if (all_employed)
                    reuse_possible = true;
                else
                    scratch_cands_.push_back(static_cast<int>(a));
            }
            if (reuse_possible || scratch_cands_.empty()) continue;
            // Greedy hitting set over the non-employed hosts; a clash with a
            // CR claimed by an earlier counted RU disqualifies this one.
            scratch_support_.clear();
            bool clash = false;
            while (!scratch_cands_.empty() && !clash) {
                ++hit_pass_;
                int best_cr = -1, best_hits = 0;
                for (int a : scratch_cands_)
                    for (const auto& [cr, g] : cands_[r][a].cr_loads) {
                        if (item_open_[ci_.pair_count() + cr]) continue;
                        int hits = hit_stamp_[cr] == hit_pass_ ? ++hit_count_[cr]
                                                               : (hit_stamp_[cr] = hit_pass_,
                                                                  hit_count_[cr] = 1);
                        if (hits > best_hits || (hits == best_hits && cr < best_cr)) {
                            best_hits = hits;
                            best_cr = cr;
                        }
                    }
                if (cr_claim_stamp_[best_cr] == claim_pass_) {
                    clash = true;
                    break;
                }
                scratch_support_.push_back(best_cr);
                scratch_cands_.erase(
                    std::remove_if(scratch_cands_.begin(), scratch_cands_.end(),
                                   [&](int a) {
                                       for (const auto& [cr, g] : cands_[r][a].cr_loads)
                                           if (cr == best_cr) return true;
                                       return false;
                                   }),
                    scratch_cands_.end());
            }
            if (clash) continue;
            ++extra;
            for (int cr : scratch_support_) cr_claim_stamp_[cr] = claim_pass_;
        }
        return extra;
    }

    void check_budget() {
        if (nodes_ > limits_.node_budget) aborted_ = true;
        if ((nodes_ & 1023) != 0) return;  // clock reads are amortized
        double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
                             .count();
        if (elapsed > limits_.time_budget_s) aborted_ = true;
    }

    // Admissible stage-1 bound: committed value plus, for every undecided
    // RU, the cheapest candidate when each still-closed item's unit cost is
    // shared across all undecided RUs able to touch it.
    struct NodeBound {
        long long v1 = 0;
        long long drc_lb = 0;    // stage >= 2
        long long omega_lb = 0;  // stage 3
    };

    NodeBound compute_bound() {
        NodeBound nb;
        // Pass 1 (cheap): per-RU minima under the root dual pricing, plus
        // the stage-specific aggregates and the branching pick.
        double frac_dual = 0.0;
        long long omega = 0;
        double pick_val = -std::numeric_limits<double>::infinity();
        pick_ru_ = -1;
        uncovered_masks_.clear();
        for (int r = 0; r < n_ru_; ++r) {
            if (decided_[r] >= 0) continue;
            double best_dual = std::numeric_limits<double>::infinity();
            int best_prio = INT_MAX;
            unsigned covered = 0;
            for (size_t a = 0; a < cands_[r].size(); ++a) {
                if (!alive_[r][a]) continue;
                const SolverCand& c = cands_[r][a];
                double cost_dual = -static_cast<double>(c.placed);
                for (int item : c.items)
                    if (!item_open_[item]) cost_dual += share_[r][item];
                best_dual = std::min(best_dual, cost_dual);
                best_prio = std::min(best_prio, c.priority);
                covered |= 1u << c.drc_pos;
            }
            frac_dual += best_dual;
            if (best_dual > pick_val) {
                pick_val = best_dual;
                pick_ru_ = r;
            }
            omega += best_prio;
            if (stage_ >= 2) {
                bool has_committed_drc = false;
                for (int d = 0; d < n_drc_; ++d)
                    if (drc_use_[d] > 0 && (covered & (1u << d))) has_committed_drc = true;
                if (!has_committed_drc) uncovered_masks_.push_back(covered);
            }
        }
        nb.v1 = committed_v1() + static_cast<long long>(std::ceil(frac_dual - 1e-9));
        if (nodes_ == 1 && std::getenv("PLACERAN_DEBUG_BOUND"))
            std::fprintf(stderr, "root variant a: frac_dual=%.6f nb=%lld\n", frac_dual, nb.v1);

        // Pass 2 (expensive) only when the dual pricing does not already
        // prune: q[item] = number of undecided RUs with an alive candidate
        // touching the (still closed) item, capped by how many minimal CR
        // loads the item's CR can still absorb.
        bool dual_prunes =
            (stage_ == 1 && have_incumbent_ && nb.v1 >= best_obj_) ||
            (stage_ >= 2 && nb.v1 > v1_star_);
        if (!dual_prunes) {
            ++pass_stamp_;
            touched_items_.clear();
            for (int r = 0; r < n_ru_; ++r) {
                if (decided_[r] >= 0) continue;
                ++ru_stamp_;
                for (size_t a = 0; a < cands_[r].size(); ++a) {
                    if (!alive_[r][a]) continue;
                    const SolverCand& c = cands_[r][a];
                    for (int item : c.items) {
                        if (item_open_[item]) continue;
                        if (q_stamp_[item] != pass_stamp_) {
                            q_stamp_[item] = pass_stamp_;
                            q_count_[item] = 0;
                            dmin_[item] = std::numeric_limits<double>::infinity();
                            touched_items_.push_back(item);
                        }
                        int cr = item < ci_.pair_count() ? item / kVirtualizableCount
                                                         : item - ci_.pair_count();
                        for (const auto& [ci, g] : c.cr_loads)
                            if (ci == cr) dmin_[item] = std::min(dmin_[item], g);
                        if (item_seen_stamp_[item] == ru_stamp_) continue;
                        item_seen_stamp_[item] = ru_stamp_;
                        ++q_count_[item];
                    }
                }
            }
            for (auto& v : seats_by_f_) v.clear();
            for (int item : touched_items_) {
                int cr = item < ci_.pair_count() ? item / kVirtualizableCount
                                                 : item - ci_.pair_count();
                long long q = q_count_[item];
                if (dmin_[item] > 0.0 && std::isfinite(dmin_[item])) {
                    double cap = rem_cr_[cr] * (1.0 + 1e-12) + 1e-9;
                    long long by_cap = static_cast<long long>(std::floor(cap / dmin_[item]));
                    q = std::min(q, std::max(1LL, by_cap));
                }
                inv_cost_[item] = 1.0 / static_cast<double>(q);
                if (item < ci_.pair_count())
                    seats_by_f_[item % kVirtualizableCount].push_back(q);
            }
            double frac = 0.0;
            double frac_pairs = 0.0;
            double fsum[kVirtualizableCount] = {};
            long long fneed[kVirtualizableCount] = {};
            long long placed_relax = 0;
            for (int r = 0; r < n_ru_; ++r) {
                if (decided_[r] >= 0) continue;
                double best = std::numeric_limits<double>::infinity();
                double best_pairs = std::numeric_limits<double>::infinity();
                double fmin[kVirtualizableCount];
                std::fill(fmin, fmin + kVirtualizableCount,
                          std::numeric_limits<double>::infinity());
                int placed_max = 0;
                for (size_t a = 0; a < cands_[r].size(); ++a) {
                    if (!alive_[r][a]) continue;
                    const SolverCand& c = cands_[r][a];
                    double cost = -static_cast<double>(c.placed);
                    double cost_pairs = -static_cast<double>(c.placed);
                    double part[kVirtualizableCount] = {};
                    for (int item : c.items)
                        if (!item_open_[item]) {
                            cost += inv_cost_[item];
                            if (item < ci_.pair_count()) {
                                cost_pairs += inv_cost_[item];
                                part[item % kVirtualizableCount] += inv_cost_[item];
                            }
                        }
                    best = std::min(best, cost);
                    best_pairs = std::min(best_pairs, cost_pairs);
                    for (int f = 0; f < kVirtualizableCount; ++f)
                        fmin[f] = std::min(fmin[f], part[f]);
                    placed_max = std::max(placed_max, c.placed);
                }
                frac += best;
                frac_pairs += best_pairs;
                for (int f = 0; f < kVirtualizableCount; ++f)
                    if (fmin[f] > 1e-12) {
                        fsum[f] += fmin[f];
                        ++fneed[f];
                    }
                placed_relax += placed_max;
            }
            nb.v1 = std::max(nb.v1, committed_v1() +
                                        static_cast<long long>(std::ceil(frac - 1e-9)));
            if (nodes_ == 1 && std::getenv("PLACERAN_DEBUG_BOUND"))
                std::fprintf(stderr, "root variant b: frac=%.6f\n", frac);
            // A third, complementary estimate: price only the pair items and
            // count employed CRs exactly — undecided RUs whose reachable CR
            // sets avoid every employed CR and are pairwise disjoint each
            // force a distinct new CR.
            long long forced = forced_new_crs();
            nb.v1 = std::max(nb.v1, committed_v1() + forced +
                                        static_cast<long long>(std::ceil(frac_pairs - 1e-9)));
            if (nodes_ == 1 && std::getenv("PLACERAN_DEBUG_BOUND"))
                std::fprintf(stderr, "root variant c: forced=%lld frac_pairs=%.6f\n", forced,
                             frac_pairs);
            // Fourth estimate: decompose the pair pricing by function and
            // strengthen each function's total with a covering argument — the
            // new (CR, f) pairs must jointly seat every RU that cannot avoid
            // opening one, and one pair seats at most q sharers.  This is
            // what detects that a function tier whose demand exceeds the
            // largest remaining CR must split across several CRs.
            long long pairs_by_function = 0;
            for (int f = 0; f < kVirtualizableCount; ++f) {
                long long t = 0;
                if (fneed[f] > 0) {
                    auto& seats = seats_by_f_[f];
                    std::sort(seats.begin(), seats.end(), std::greater<long long>());
                    long long covered = 0;
                    for (long long s : seats) {
                        ++t;
                        covered += s;
                        if (covered >= fneed[f]) break;
                    }
                }
                pairs_by_function +=
                    std::max(t, static_cast<long long>(std::ceil(fsum[f] - 1e-9)));
                if (nodes_ == 1 && std::getenv("PLACERAN_DEBUG_BOUND")) {
                    std::fprintf(stderr, "  f=%d fneed=%lld fsum=%.4f t=%lld seats=[", f + 2,
                                 fneed[f], fsum[f], t);
                    for (long long s : seats_by_f_[f]) std::fprintf(stderr, "%lld,", s);
                    std::fprintf(stderr, "]\n");
                }
            }
            nb.v1 = std::max(nb.v1,
                             committed_v1() + forced + pairs_by_function - placed_relax);
            if (nodes_ == 1 && std::getenv("PLACERAN_DEBUG_BOUND"))
                std::fprintf(stderr, "root variant d: pairs_by_function=%lld placed_relax=%lld\n",
                             pairs_by_function, placed_relax);
        }

        if (stage_ >= 2) {
            long long committed_drcs = 0;
            for (int d = 0; d < n_drc_; ++d)
                if (drc_use_[d] > 0) ++committed_drcs;
            // Pairwise-disjoint uncovered option sets each force a new DRC.
            long long extra = 0;
            for (size_t i = 0; i < uncovered_masks_.size(); ++i) {
                unsigned m = uncovered_masks_[i];
                if (m == 0) continue;  // already consumed
                ++extra;
                for (size_t jj = i + 1; jj < uncovered_masks_.size(); ++jj)
                    if (uncovered_masks_[jj] & m) uncovered_masks_[jj] = 0;
            }
            nb.drc_lb = committed_drcs + extra;
        }
        if (stage_ == 3) nb.omega_lb = omega_sum_ + omega;
        return nb;
    }

    struct Frame {
        int ru;
        int cand;
        std::vector<int> opened;
        std::vector<std::pair<int, int>> killed;
        bool conflict = false;
    };

    void assign(Frame& f) {
        const SolverCand& c = cands_[f.ru][f.cand];
        for (const auto& [li, bps] : c.link_loads) rem_link_[li] -= bps;
        for (const auto& [cr, g] : c.cr_loads) rem_cr_[cr] -= g;
        for (int item : c.items)
            if (!item_open_[item]) {
                item_open_[item] = 1;
                f.opened.push_back(item);
                ++opened_items_;
            }
        placed_sum_ += c.placed;
        omega_sum_ += c.priority;
        if (++drc_use_[c.drc_pos] == 1) ++unique_drcs_;
        decided_[f.ru] = f.cand;
        --undecided_;

        auto sweep = [&](const std::vector<std::pair<int, int>>& users) {
            for (const auto& [r2, a2] : users) {
                if (decided_[r2] >= 0 || !alive_[r2][a2]) continue;
                if (cand_fits(cands_[r2][a2])) continue;
                alive_[r2][a2] = 0;
                f.killed.emplace_back(r2, a2);
                if (--alive_count_[r2] == 0) f.conflict = true;
            }
        };
        for (const auto& [li, bps] : c.link_loads) sweep(link_users_[li]);
        for (const auto& [cr, g] : c.cr_loads) sweep(cr_users_[cr]);
    }

    void undo(Frame& f) {
        const SolverCand& c = cands_[f.ru][f.cand];
        for (const auto& [r2, a2] : f.killed) {
            alive_[r2][a2] = 1;
            ++alive_count_[r2];
        }
        for (int item : f.opened) {
            item_open_[item] = 0;
            --opened_items_;
        }
        for (const auto& [li, bps] : c.link_loads) rem_link_[li] += bps;
        for (const auto& [cr, g] : c.cr_loads) rem_cr_[cr] += g;
        placed_sum_ -= c.placed;
        omega_sum_ -= c.priority;
        if (--drc_use_[c.drc_pos] == 0) --unique_drcs_;
        decided_[f.ru] = -1;
        ++undecided_;
    }

    // Greedy dive to a first complete assignment before the search starts:
    // it hands the search an incumbent to prune against even when the priced
    // descent order leads into capacity dead-ends.  Candidates are ranked by
    // the worst fraction of remaining link/CR headroom they consume, so the
    // dive stays feasible as long as any headroom-preserving choice exists.
    void seed_incumbent() {
        std::vector<Frame> trail;
        bool dead = false;
        while (undecided_ > 0 && !dead) {
            int ru = -1;
            for (int r = 0; r < n_ru_; ++r) {
                if (decided_[r] >= 0) continue;
                if (ru < 0 || alive_count_[r] < alive_count_[ru]) ru = r;
            }
            std::vector<std::pair<double, int>> order;
            for (size_t a = 0; a < cands_[ru].size(); ++a) {
                if (!alive_[ru][a]) continue;
                const SolverCand& c = cands_[ru][a];
                double tight = 0.0;
                for (const auto& [li, bps] : c.link_loads)
                    tight = std::max(tight, bps / std::max(rem_link_[li], 1e-9));
                for (const auto& [cr, g] : c.cr_loads)
                    tight = std::max(tight, g / std::max(rem_cr_[cr], 1e-9));
                order.emplace_back(tight, static_cast<int>(a));
            }
            std::sort(order.begin(), order.end());
            dead = true;
            for (const auto& [tight, a] : order) {
                Frame f;
                f.ru = ru;
                f.cand = a;
                assign(f);
                if (f.conflict) {
                    undo(f);
                    continue;
                }
                trail.push_back(std::move(f));
                dead = false;
                break;
            }
        }
        if (!dead && leaf_admissible()) {
            have_incumbent_ = true;
            best_obj_ = leaf_objective();
            best_choice_.resize(n_ru_);
            for (int r = 0; r < n_ru_; ++r)
                best_choice_[r] = cands_[r][decided_[r]].ordinal;
        }
        for (auto it = trail.rbegin(); it != trail.rend(); ++it) undo(*it);
    }

    long long leaf_objective() const {
        switch (stage_) {
            case 1: return committed_v1();
            case 2: return unique_drcs_;
            default: return omega_sum_;
        }
    }

    bool leaf_admissible() const {
        if (stage_ >= 2 && committed_v1() != v1_star_) return false;
        if (stage_ == 3 && unique_drcs_ != v2_star_) return false;
        return true;
    }

    void dfs(long long parent_bound) {
        ++nodes_;
        check_budget();
        if (aborted_) {
            abort_bound_ = std::min(abort_bound_, parent_bound);
            return;
        }

        if (undecided_ == 0) {
            if (!leaf_admissible()) return;
            long long obj = leaf_objective();
            if (!have_incumbent_ || obj < best_obj_) {
                have_incumbent_ = true;
                best_obj_ = obj;
                // Record catalog-order ordinals, not internal indices.
                best_choice_.resize(n_ru_);
                for (int r = 0; r < n_ru_; ++r)
                    best_choice_[r] = cands_[r][decided_[r]].ordinal;
            }
            return;
        }

        NodeBound nb = compute_bound();
        long long stage_bound = stage_ == 1 ? nb.v1 : (stage_ == 2 ? nb.drc_lb : nb.omega_lb);
        // Ancestor bounds stay valid for the whole subtree, so the
        // effective bound never weakens on the way down.
        stage_bound = std::max(stage_bound, parent_bound);
        if (stage_ >= 2 && nb.v1 > v1_star_) return;
        if (stage_ == 3 && nb.drc_lb > v2_star_) return;
        if (have_incumbent_ && stage_bound >= best_obj_) return;

        // Branching RU: in stage 1, the RU with the costliest cheapest
        // candidate under the dual pricing (its assignment moves the bound
        // most); otherwise fail-first on the alive count.
        int ru = -1;
        if (stage_ == 1 && pick_ru_ >= 0) {
            ru = pick_ru_;
        } else {
            for (int r = 0; r < n_ru_; ++r) {
                if (decided_[r] >= 0) continue;
                if (ru < 0 || alive_count_[r] < alive_count_[ru]) ru = r;
            }
        }

        // Candidate order: smallest bound contribution first, ties by
        // ordinal (which encodes route rank then catalog order).
        std::vector<std::pair<double, int>> order;
        for (size_t a = 0; a < cands_[ru].size(); ++a) {
            if (!alive_[ru][a]) continue;
            const SolverCand& c = cands_[ru][a];
            double score = 0;
            switch (stage_) {
                case 1:
                    // Order by the capacity-aware q prices from the bound
                    // pass; they amortize shared items over the RUs that can
                    // actually fit on the CR.
                    score = -static_cast<double>(c.placed);
                    for (int item : c.items)
                        if (!item_open_[item]) score += inv_cost_[item];
                    break;
                case 2: {
                    int opens = 0;
                    for (int item : c.items)
                        if (!item_open_[item]) ++opens;
                    score = (drc_use_[c.drc_pos] > 0 ? 0 : 1000) + opens;
                    break;
                }
                default:
                    score = c.priority;
                    break;
            }
            order.emplace_back(score, static_cast<int>(a));
        }
        std::sort(order.begin(), order.end());

        for (const auto& [score, a] : order) {
            if (aborted_) {
                abort_bound_ = std::min(abort_bound_, stage_bound);
                return;
            }
            if (!alive_[ru][a]) continue;  // killed by a sibling? cannot happen, kept for safety
            Frame f;
            f.ru = ru;
            f.cand = a;
            assign(f);
            if (!f.conflict) dfs(stage_bound);
            undo(f);
        }
    }

    const CompiledInstance& ci_;
    int stage_;
    long long v1_star_;
    long long v2_star_;
    const SolveLimits& limits_;

    int n_ru_ = 0, n_cr_ = 0, n_item_ = 0, n_drc_ = 0;
    std::vector<std::vector<SolverCand>> cands_;
    std::vector<std::vector<std::pair<int, int>>> link_users_;
    std::vector<std::vector<std::pair<int, int>>> cr_users_;

    std::vector<double> rem_link_, rem_cr_;
    std::vector<char> item_open_;
    std::vector<std::vector<char>> alive_;
    std::vector<int> alive_count_;
    std::vector<int> decided_;
    int undecided_ = 0;
    long long opened_items_ = 0, placed_sum_ = 0, omega_sum_ = 0;
    std::vector<int> drc_use_;
    int unique_drcs_ = 0;

    std::vector<long long> item_seen_stamp_, q_stamp_;
    std::vector<int> q_count_;
    std::vector<double> dmin_, inv_cost_;
    std::array<std::vector<long long>, kVirtualizableCount> seats_by_f_;
    std::vector<int> touched_items_;
    long long ru_stamp_ = 0, pass_stamp_ = 0;
    std::vector<unsigned> uncovered_masks_;
    std::vector<long long> cr_claim_stamp_;
    std::vector<int> scratch_support_;
    std::vector<int> scratch_cands_;
    std::vector<long long> hit_stamp_;
    std::vector<int> hit_count_;
    long long claim_pass_ = 0;
    long long hit_pass_ = 0;
    std::vector<std::vector<double>> share_;
    int pick_ru_ = -1;

    bool have_incumbent_ = false;
    long long best_obj_ = 0;
    std::vector<int> best_choice_;
    long long nodes_ = 0;
    bool aborted_ = false;
    long long abort_bound_ = 0;
    std::chrono::steady_clock::time_point start_;
};

}  // namespace

StageSolution solve_program(const IntegerProgram& program, const SolveLimits& limits) {
    if (limits.time_budget_s <= 0 || limits.node_budget <= 0)
        throw std::invalid_argument("solve limits must be positive");
    BranchAndBound bb(program, limits);
    return bb.run();
}

AssignmentValue evaluate_assignment(const CompiledInstance& ci, const std::vector<int>& choice) {
    AssignmentValue v;
    if (choice.size() != ci.rus.size()) return v;

    std::vector<double> link_load(ci.link_capacity.size(), 0.0);
    std::vector<double> cr_load(ci.cr_capacity.size(), 0.0);
    std::set<int> pairs, crs, drcs;
    for (size_t r = 0; r < choice.size(); ++r) {
        if (choice[r] < 0 || choice[r] >= static_cast<int>(ci.candidates[r].size())) return v;
        const CompiledCandidate& c = ci.candidates[r][choice[r]];
        for (const auto& [li, bps] : c.link_loads) link_load[li] += bps;
        for (const auto& [cr, g] : c.cr_loads) cr_load[cr] += g;
        for (int p : c.pair_opens) pairs.insert(p);
        for (int cr : c.cr_opens) crs.insert(cr);
        drcs.insert(c.drc_id);
        v.placed_functions += c.placed_functions;
        v.objective.v3 += c.priority;
    }
    v.feasible = true;
    for (size_t li = 0; li < link_load.size(); ++li)
        if (!capacity_fits(link_load[li], ci.link_capacity[li])) v.feasible = false;
    for (size_t cr = 0; cr < cr_load.size(); ++cr)
        if (!capacity_fits(cr_load[cr], ci.cr_capacity[cr])) v.feasible = false;
    v.employed_crs = static_cast<long long>(crs.size());
    v.distinct_pairs = static_cast<long long>(pairs.size());
    v.phi2 = v.placed_functions - v.distinct_pairs;
    v.objective.v1 = v.employed_crs - v.phi2;
    v.objective.v2 = static_cast<long long>(drcs.size());
    return v;
}

BruteForceResult brute_force(const CompiledInstance& ci, double guard) {
    double product = 1.0;
    for (const auto& cs : ci.candidates) product *= static_cast<double>(cs.size());
    if (product > guard)
        throw std::invalid_argument("brute force refused: " + std::to_string(product) +
                                    " combinations exceed the guard");

    BruteForceResult best;
    std::vector<int> choice(ci.rus.size(), 0);
    if (ci.rus.empty()) {
        best.feasible = true;
        return best;
    }

    auto lex_less = [](const ObjectiveVector& a, const ObjectiveVector& b) {
        if (a.v1 != b.v1) return a.v1 < b.v1;
        if (a.v2 != b.v2) return a.v2 < b.v2;
        return a.v3 < b.v3;
    };

    size_t depth = 0;
    while (true) {
        if (depth == ci.rus.size()) {
            AssignmentValue v = evaluate_assignment(ci, choice);
            if (v.feasible && (!best.feasible || lex_less(v.objective, best.objective))) {
                best.feasible = true;
                best.objective = v.objective;
                best.choice = choice;
            }
            // step
            while (depth > 0) {
                --depth;
                if (++choice[depth] < static_cast<int>(ci.candidates[depth].size())) {
                    ++depth;
                    break;
                }
                choice[depth] = 0;
            }
            if (depth == 0) break;
            continue;
        }
        if (ci.candidates[depth].empty()) return best;  // infeasible instance
        ++depth;
    }
    return best;
}

LexicographicResult solve_lexicographic(const CompiledInstance& instance,
                                        const SolveLimits& limits) {
    LexicographicResult out;
    if (!rus_without_candidates(instance).empty()) {
        out.status = SolveStatus::Infeasible;
        out.stage1.status = SolveStatus::Infeasible;
        return out;
    }

    IntegerProgram p1 = build_stage1(instance);
    out.stage1 = solve_program(p1, limits);
    if (out.stage1.status != SolveStatus::Optimal) {
        out.status = out.stage1.status;
        out.choice = out.stage1.choice;
        if (out.stage1.has_assignment())
            out.objective = evaluate_assignment(instance, out.choice).objective;
        return out;
    }

    IntegerProgram p2 = build_stage2(instance, out.stage1.objective);
    out.stage2 = solve_program(p2, limits);
    if (out.stage2.status == SolveStatus::Infeasible)
        throw std::logic_error("stage 2 infeasible although stage 1 was solved");
    if (out.stage2.status != SolveStatus::Optimal) {
        out.status = out.stage2.status;
        out.choice = out.stage2.has_assignment() ? out.stage2.choice : out.stage1.choice;
        out.objective = evaluate_assignment(instance, out.choice).objective;
        return out;
    }

    IntegerProgram p3 = build_stage3(instance, out.stage1.objective, out.stage2.objective);
    out.stage3 = solve_program(p3, limits);
    if (out.stage3.status == SolveStatus::Infeasible)
        throw std::logic_error("stage 3 infeasible although stage 2 was solved");
    out.status = out.stage3.status;
    out.choice = out.stage3.has_assignment() ? out.stage3.choice : out.stage2.choice;
    out.objective = evaluate_assignment(instance, out.choice).objective;
    return out;
}

ValidationReport audit_assignment(const CompiledInstance& ci, const std::vector<int>& choice) {
    ValidationReport report;
    auto add = [&](std::string code, std::string subject, std::string message) {
        report.push_back({std::move(code), std::move(subject), std::move(message)});
    };
    const Topology& topo = *ci.topology;
    const DrcCatalog& catalog = *ci.catalog;

    if (choice.size() != ci.rus.size()) {
        add("eq4", "", "assignment must select exactly one candidate per RU");
        return report;
    }

    std::map<LinkId, double> link_load;
    std::map<NodeId, double> cr_load;

    for (size_t r = 0; r < ci.rus.size(); ++r) {
        const NodeId& ru = ci.rus[r];
        if (choice[r] < 0 || choice[r] >= static_cast<int>(ci.candidates[r].size())) {
            add("eq4", ru, "missing or out-of-range candidate selection");
            continue;
        }
        const CandidateAssignment& cand = *ci.candidates[r][choice[r]].source;
        const Drc* drc = catalog.find(cand.drc_id);
        if (!drc) {
            add("catalog", ru, "unknown DRC " + std::to_string(cand.drc_id));
            continue;
        }
        const Route& route = *cand.route;

        // Re-derive host positions along the route from raw adjacency.
        auto position_of = [&](const NodeId& cr) -> int {
            const Node* ru_node = topo.find_node(ru);
            if (ru_node && ru_node->attached_cr && *ru_node->attached_cr == cr)
                return static_cast<int>(route.nodes.size()) - 1;
            for (size_t pos = 0; pos + 1 < route.nodes.size(); ++pos) {
                int ni = topo.node_index(route.nodes[pos]);
                for (int li : topo.incident_links(ni)) {
                    const Link& l = topo.links()[li];
                    if (l.a == cr || l.b == cr) return static_cast<int>(pos);
                }
            }
            return -1;
        };

        int n_links = static_cast<int>(route.links.size());
        int bh_end = n_links, mh_end = n_links;
        switch (drc->set_label) {
            case DrcSetLabel::NgRan3:
                bh_end = cand.cu_host ? position_of(*cand.cu_host) : -1;
                mh_end = cand.du_host ? position_of(*cand.du_host) : -1;
                break;
            case DrcSetLabel::NgRan2:
                bh_end = cand.cu_host ? position_of(*cand.cu_host) : -1;
                mh_end = n_links;
                break;
            case DrcSetLabel::CRan:
                bh_end = cand.cu_host ? position_of(*cand.cu_host) : -1;
                mh_end = bh_end;
                break;
            case DrcSetLabel::DRan:
                bh_end = n_links;
                mh_end = n_links;
                break;
        }
        if (bh_end < 0 || mh_end < 0 || bh_end > mh_end) {
            add("hosts", ru, "CU/DU hosts are not ordered along the route");
            continue;
        }

        auto seg_latency = [&](int from, int to) {
            double s = 0.0;
            for (int i = from; i < to; ++i) s += topo.find_link(route.links[i])->latency_s;
            return s;
        };
        if (seg_latency(0, bh_end) > drc->backhaul.latency_bound_s)
            add("eq6", ru, "backhaul latency bound violated");
        if (seg_latency(bh_end, mh_end) > drc->midhaul.latency_bound_s)
            add("eq7", ru, "midhaul latency bound violated");
        if (seg_latency(mh_end, n_links) > drc->fronthaul.latency_bound_s)
            add("eq8", ru, "fronthaul latency bound violated");

        auto load_segment = [&](int from, int to, double bps) {
            if (bps <= 0) return;
            for (int i = from; i < to; ++i) link_load[route.links[i]] += bps;
        };
        load_segment(0, bh_end, drc->backhaul.bandwidth_bps);
        load_segment(bh_end, mh_end, drc->midhaul.bandwidth_bps);
        load_segment(mh_end, n_links, drc->fronthaul.bandwidth_bps);

        auto unit_demand = [&](const std::vector<VnfId>& fs) {
            double s = 0.0;
            for (VnfId f : fs) s += catalog.demand(f);
            return s;
        };
        if (cand.cu_host) cr_load[*cand.cu_host] += unit_demand(drc->cu_functions);
        if (cand.du_host && drc->set_label != DrcSetLabel::CRan)
            cr_load[*cand.du_host] += unit_demand(drc->du_functions);
        auto site = drc->ru_colocated_functions();
        if (!site.empty()) {
            const Node* ru_node = topo.find_node(ru);
            if (!ru_node || !ru_node->attached_cr)
                add("hosts", ru, "DRC needs a co-located CR but the RU has none");
            else
                cr_load[*ru_node->attached_cr] += unit_demand(site);
        }
    }

    for (const auto& [lid, load] : link_load) {
        const Link* l = topo.find_link(lid);
        if (!l || !capacity_fits(load, l->capacity_bps))
            add("eq5", lid, "link capacity exceeded");
    }
    for (const auto& [cid, load] : cr_load) {
        const Node* n = topo.find_node(cid);
        if (!n || !capacity_fits(load, n->proc_capacity.value_or(0.0)))
            add("eq9", cid, "CR processing capacity exceeded");
    }
    return report;
}

}  // namespace placeran
