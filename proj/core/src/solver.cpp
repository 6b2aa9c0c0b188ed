#include "deltarep/solver.hpp"

#include <algorithm>
#include <chrono>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include "deltarep/errors.hpp"

namespace deltarep {

namespace {

using Clock = std::chrono::steady_clock;

// Clause form after preprocessing: literals deduplicated and sorted,
// tautologies dropped.
struct Prepared {
    std::vector<std::vector<CnfLit>> clauses;
};

Prepared preprocess(const CnfProblem& p) {
    Prepared out;
    for (const auto& clause : p.clauses) {
        std::vector<CnfLit> lits = clause;
        for (const CnfLit& l : lits)
            if (l.var >= p.var_count) throw Error("clause literal out of range");
        std::sort(lits.begin(), lits.end());
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        bool tautology = false;
        for (std::size_t i = 0; i + 1 < lits.size(); ++i)
            if (lits[i].var == lits[i + 1].var) tautology = true;
        if (tautology) continue;
        if (lits.empty()) throw UnsatisfiableError("empty clause");
        out.clauses.push_back(std::move(lits));
    }
    return out;
}

struct BudgetExpired {};

class Search {
  public:
    Search(const CnfProblem& p, Prepared prep, std::optional<double> budget)
        : problem_(p), clauses_(std::move(prep.clauses)), budget_(budget), start_(Clock::now()) {
        n_ = p.var_count;
        vals_.assign(n_, -1);
        pos_occ_.resize(n_);
        neg_occ_.resize(n_);
        sat_count_.assign(clauses_.size(), 0);
        unassigned_count_.assign(clauses_.size(), 0);
        for (std::uint32_t c = 0; c < clauses_.size(); ++c) {
            unassigned_count_[c] = static_cast<std::uint32_t>(clauses_[c].size());
            for (const CnfLit& l : clauses_[c])
                (l.negated ? neg_occ_ : pos_occ_)[l.var].push_back(c);
            if (unassigned_count_[c] == 1) unit_queue_.push_back(c);
        }
        seed_incumbent();
    }

    SolverSolution run() {
        try {
            greedy_dive();
            dive();
            proved_ = true;
        } catch (const BudgetExpired&) {
            proved_ = false;
        }
        if (!has_best_) throw proved_ ? Error("unsatisfiable")  // replaced below
                                      : Error("budget");
        SolverSolution sol;
        sol.assignment = best_assignment_;
        sol.false_designated = best_false_;
        sol.cost = best_false_.size();
        sol.proved_optimal = proved_;
        sol.decisions = decisions_;
        return sol;
    }

    bool has_incumbent() const { return has_best_; }
    bool proved() const { return proved_; }

  private:
    // All-designated-False / rest-True: feasible for every formula whose
    // clauses each hold a negated designated literal; used only as a warm
    // start so budget exhaustion still returns something valid.
    void seed_incumbent() {
        std::vector<bool> a(n_, true);
        for (std::uint32_t v = 0; v < n_; ++v)
            if (problem_.is_designated(v)) a[v] = false;
        for (const auto& clause : clauses_) {
            bool sat = false;
            for (const CnfLit& l : clause)
                if (a[l.var] != l.negated) { sat = true; break; }
            if (!sat) return;
        }
        std::vector<std::uint32_t> falses;
        for (std::uint32_t v = 0; v < n_; ++v)
            if (problem_.is_designated(v) && !a[v]) falses.push_back(v);
        consider(std::move(a), std::move(falses));
    }

    // One greedy descent to warm-start the incumbent: clauses satisfiable
    // only by paying (every open literal a negated designated variable) are
    // covered by the variable hitting the most of them; everything else is
    // satisfied for free.  Aborts quietly on conflict, the incumbent is just
    // a bound.
    void greedy_dive() {
        std::size_t mark = trail_.size();
        bool ok = propagate();
        while (ok && satisfied_clauses_ < clauses_.size()) {
            check_budget();
            std::vector<std::uint32_t> tally(n_, 0);
            std::uint32_t free_var = n_;
            bool free_value = true;
            for (std::uint32_t c = 0; c < clauses_.size(); ++c) {
                if (sat_count_[c] > 0) continue;
                bool paid = true;
                for (const CnfLit& l : clauses_[c]) {
                    if (vals_[l.var] != -1) continue;
                    if (!l.negated || !problem_.is_designated(l.var)) {
                        paid = false;
                        if (free_var == n_) {
                            free_var = l.var;
                            free_value = !l.negated;
                        }
                        break;
                    }
                }
                if (!paid) continue;
                for (const CnfLit& l : clauses_[c])
                    if (vals_[l.var] == -1) ++tally[l.var];
            }
            std::uint32_t best_var = n_;
            std::uint32_t best_count = 0;
            for (std::uint32_t v = 0; v < n_; ++v)
                if (tally[v] > best_count) { best_count = tally[v]; best_var = v; }
            if (best_var != n_)
                ok = assign(best_var, false) && propagate();
            else if (free_var != n_)
                ok = assign(free_var, free_value) && propagate();
            else
                ok = false;  // open clauses but nothing to assign
        }
        if (ok) complete_solution();
        undo_to(mark);
        // Re-seed the unit queue: greedy consumed the construction-time
        // entries and undo does not restore them.
        unit_queue_.clear();
        for (std::uint32_t c = 0; c < clauses_.size(); ++c)
            if (sat_count_[c] == 0 && unassigned_count_[c] == 1) unit_queue_.push_back(c);
    }

    void consider(std::vector<bool> assignment, std::vector<std::uint32_t> falses) {
        if (!has_best_ || falses.size() < best_false_.size() ||
            (falses.size() == best_false_.size() &&
             std::lexicographical_compare(falses.begin(), falses.end(), best_false_.begin(),
                                          best_false_.end()))) {
            has_best_ = true;
            best_false_ = std::move(falses);
            best_assignment_ = std::move(assignment);
        }
    }

    void check_budget() {
        if (!budget_) return;
        if (++budget_probe_ % 64 != 0) return;
        if (std::chrono::duration<double>(Clock::now() - start_).count() > *budget_)
            throw BudgetExpired{};
    }

    // ---- assignment bookkeeping ----

    bool assign(std::uint32_t v, bool value) {  // false on conflict
        vals_[v] = value ? 1 : 0;
        trail_.push_back(v);
        if (problem_.is_designated(v) && !value) ++cost_;
        const auto& sat_side = value ? pos_occ_[v] : neg_occ_[v];
        const auto& unsat_side = value ? neg_occ_[v] : pos_occ_[v];
        bool conflict = false;
        for (std::uint32_t c : sat_side) {
            if (sat_count_[c]++ == 0) ++satisfied_clauses_;
            --unassigned_count_[c];
        }
        for (std::uint32_t c : unsat_side) {
            --unassigned_count_[c];
            if (sat_count_[c] == 0 && unassigned_count_[c] == 0) conflict = true;
            if (sat_count_[c] == 0 && unassigned_count_[c] == 1) unit_queue_.push_back(c);
        }
        return !conflict;
    }

    void undo_to(std::size_t mark) {
        while (trail_.size() > mark) {
            std::uint32_t v = trail_.back();
            trail_.pop_back();
            bool value = vals_[v] == 1;
            if (problem_.is_designated(v) && !value) --cost_;
            const auto& sat_side = value ? pos_occ_[v] : neg_occ_[v];
            const auto& unsat_side = value ? neg_occ_[v] : pos_occ_[v];
            for (std::uint32_t c : sat_side) {
                if (--sat_count_[c] == 0) --satisfied_clauses_;
                ++unassigned_count_[c];
            }
            for (std::uint32_t c : unsat_side) ++unassigned_count_[c];
            vals_[v] = -1;
        }
    }

    // Drains the queue of clauses that became unit; false on conflict.
    bool drain_units() {
        while (!unit_queue_.empty()) {
            std::uint32_t c = unit_queue_.back();
            unit_queue_.pop_back();
            if (sat_count_[c] > 0 || unassigned_count_[c] != 1) continue;  // stale entry
            for (const CnfLit& l : clauses_[c]) {
                if (vals_[l.var] != -1) continue;
                if (!assign(l.var, !l.negated)) {
                    unit_queue_.clear();
                    return false;
                }
                break;
            }
        }
        return true;
    }

    // Unit propagation plus cost-safe pure literals; false on conflict.
    // Pure literals are forced only where the pure polarity is free of cost:
    // positive-pure for any variable, negative-pure for non-designated ones.
    bool propagate() {
        while (true) {
            if (!drain_units()) return false;
            bool changed = false;
            for (std::uint32_t v = 0; v < n_; ++v) {
                if (vals_[v] != -1) continue;
                bool pos = false, neg = false;
                for (std::uint32_t c : pos_occ_[v])
                    if (sat_count_[c] == 0) { pos = true; break; }
                for (std::uint32_t c : neg_occ_[v])
                    if (sat_count_[c] == 0) { neg = true; break; }
                if (pos && !neg) {
                    if (!assign(v, true)) { unit_queue_.clear(); return false; }
                    changed = true;
                } else if (neg && !pos && !problem_.is_designated(v)) {
                    if (!assign(v, false)) { unit_queue_.clear(); return false; }
                    changed = true;
                }
            }
            if (!changed) return true;
        }
    }

    // Count variable-disjoint unsatisfied clauses that cannot be satisfied
    // without paying (every open literal is a negated designated variable).
    std::uint64_t lower_bound_extra() {
        std::set<std::uint32_t> used;
        std::uint64_t extra = 0;
        for (std::uint32_t c = 0; c < clauses_.size(); ++c) {
            if (sat_count_[c] > 0) continue;
            bool free_option = false;
            bool overlaps = false;
            for (const CnfLit& l : clauses_[c]) {
                if (vals_[l.var] != -1) continue;
                if (!l.negated || !problem_.is_designated(l.var)) { free_option = true; break; }
                if (used.contains(l.var)) overlaps = true;
            }
            if (free_option || overlaps) continue;
            bool any_open = false;
            for (const CnfLit& l : clauses_[c])
                if (vals_[l.var] == -1) { used.insert(l.var); any_open = true; }
            if (any_open) ++extra;
        }
        return extra;
    }

    std::optional<std::uint32_t> pick_branch_var() {
        std::vector<std::uint32_t> tally(n_, 0);
        bool any_unsat = false;
        for (std::uint32_t c = 0; c < clauses_.size(); ++c) {
            if (sat_count_[c] > 0) continue;
            any_unsat = true;
            for (const CnfLit& l : clauses_[c])
                if (vals_[l.var] == -1 && problem_.is_designated(l.var)) ++tally[l.var];
        }
        if (!any_unsat) return std::nullopt;
        std::uint32_t best_var = n_;
        std::uint32_t best_count = 0;
        for (std::uint32_t v = 0; v < n_; ++v)
            if (tally[v] > best_count) { best_count = tally[v]; best_var = v; }
        if (best_var != n_) return best_var;
        // only non-designated variables left in open clauses
        for (std::uint32_t c = 0; c < clauses_.size(); ++c) {
            if (sat_count_[c] > 0) continue;
            for (const CnfLit& l : clauses_[c])
                if (vals_[l.var] == -1) return l.var;
        }
        return std::nullopt;  // open clauses but nothing assignable: conflict upstream
    }

    void complete_solution() {
        std::vector<bool> a(n_, true);
        std::vector<std::uint32_t> falses;
        for (std::uint32_t v = 0; v < n_; ++v) {
            if (vals_[v] == -1) continue;  // free variables finish True
            a[v] = vals_[v] == 1;
            if (!a[v] && problem_.is_designated(v)) falses.push_back(v);
        }
        consider(std::move(a), std::move(falses));
    }

    void dive() {
        check_budget();
        if (!propagate()) return;
        if (satisfied_clauses_ == clauses_.size()) {
            complete_solution();
            return;
        }
        if (has_best_ && cost_ + lower_bound_extra() >= best_false_.size()) return;
        auto v = pick_branch_var();
        if (!v) return;  // dead end
        ++decisions_;
        for (bool value : {true, false}) {
            std::size_t mark = trail_.size();
            if (assign(*v, value)) dive();
            undo_to(mark);
        }
    }

    const CnfProblem& problem_;
    std::vector<std::vector<CnfLit>> clauses_;
    std::optional<double> budget_;
    Clock::time_point start_;
    std::uint64_t budget_probe_ = 0;

    std::uint32_t n_ = 0;
    std::vector<signed char> vals_;
    std::vector<std::vector<std::uint32_t>> pos_occ_, neg_occ_;
    std::vector<std::uint32_t> sat_count_, unassigned_count_;
    std::uint32_t satisfied_clauses_ = 0;
    std::vector<std::uint32_t> unit_queue_;
    std::vector<std::uint32_t> trail_;
    std::uint64_t cost_ = 0;
    std::uint64_t decisions_ = 0;

    bool has_best_ = false;
    std::vector<std::uint32_t> best_false_;
    std::vector<bool> best_assignment_;
    bool proved_ = false;
};

}  // namespace

SolverSolution BranchBoundSolver::solve(const CnfProblem& problem,
                                        std::optional<double> budget_seconds) {
    Prepared prep = preprocess(problem);
    Search search(problem, std::move(prep), budget_seconds);
    try {
        return search.run();
    } catch (const Error&) {
        if (search.proved()) throw UnsatisfiableError("CNF has no satisfying assignment");
        throw BudgetError("time budget expired before a feasible assignment was found");
    }
}

SolverSolution solve_min_ones(const CnfProblem& problem, std::optional<double> budget_seconds) {
    BranchBoundSolver solver;
    return solver.solve(problem, budget_seconds);
}

SolverSolution solve_by_enumeration(const CnfProblem& problem, std::uint32_t guard) {
    if (problem.var_count > guard)
        throw SizeGuardError("enumeration guard: " + std::to_string(problem.var_count) +
                             " variables > " + std::to_string(guard));
    Prepared prep = preprocess(problem);
    const std::uint32_t n = problem.var_count;
    std::optional<SolverSolution> best;
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
        bool ok = true;
        for (const auto& clause : prep.clauses) {
            bool sat = false;
            for (const CnfLit& l : clause) {
                bool value = (mask >> l.var) & 1;
                if (value != l.negated) { sat = true; break; }
            }
            if (!sat) { ok = false; break; }
        }
        if (!ok) continue;
        std::vector<std::uint32_t> falses;
        for (std::uint32_t v = 0; v < n; ++v)
            if (problem.is_designated(v) && !((mask >> v) & 1)) falses.push_back(v);
        if (!best || falses.size() < best->false_designated.size() ||
            (falses.size() == best->false_designated.size() &&
             std::lexicographical_compare(falses.begin(), falses.end(),
                                          best->false_designated.begin(),
                                          best->false_designated.end()))) {
            SolverSolution sol;
            sol.assignment.assign(n, false);
            for (std::uint32_t v = 0; v < n; ++v) sol.assignment[v] = (mask >> v) & 1;
            sol.cost = falses.size();
            sol.false_designated = std::move(falses);
            sol.proved_optimal = true;
            best = std::move(sol);
        }
    }
    if (!best) throw UnsatisfiableError("CNF has no satisfying assignment");
    return *best;
}

CnfProblem parse_dimacs(std::istream& in) {
    CnfProblem p;
    std::vector<std::uint32_t> designated_vars;
    std::string line;
    bool header_seen = false;
    std::vector<CnfLit> current;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (first == "c") {
            std::string word;
            if (ls >> word && word == "designated") {
                long v;
                while (ls >> v)
                    if (v > 0) designated_vars.push_back(static_cast<std::uint32_t>(v - 1));
            }
            continue;
        }
        if (first == "p") {
            std::string fmt;
            long nv = 0, nc = 0;
            if (!(ls >> fmt >> nv >> nc) || fmt != "cnf" || nv < 0)
                throw IoError("malformed DIMACS header");
            p.var_count = static_cast<std::uint32_t>(nv);
            header_seen = true;
            continue;
        }
        if (!header_seen) throw IoError("DIMACS clauses before header");
        std::istringstream rest(line);
        long lit;
        while (rest >> lit) {
            if (lit == 0) {
                p.clauses.push_back(current);
                current.clear();
            } else {
                std::uint32_t v = static_cast<std::uint32_t>(lit > 0 ? lit : -lit) - 1;
                if (v >= p.var_count) throw IoError("DIMACS literal out of range");
                current.push_back(CnfLit{v, lit < 0});
            }
        }
    }
    if (!header_seen) throw IoError("missing DIMACS header");
    if (!current.empty()) p.clauses.push_back(current);
    if (!designated_vars.empty()) {
        p.designated.assign(p.var_count, false);
        for (std::uint32_t v : designated_vars)
            if (v < p.var_count) p.designated[v] = true;
    }
    return p;
}

void write_dimacs(const CnfProblem& problem, std::ostream& out) {
    out << "c min-ones cnf (designated variables count toward the objective)\n";
    std::uint32_t per_line = 0;
    bool any = false;
    for (std::uint32_t v = 0; v < problem.var_count; ++v) {
        if (!problem.is_designated(v)) continue;
        if (per_line == 0) out << "c designated";
        out << ' ' << (v + 1);
        any = true;
        if (++per_line == 20) { out << '\n'; per_line = 0; }
    }
    if (per_line != 0) out << '\n';
    if (!any) out << "c designated\n";
    out << "p cnf " << problem.var_count << ' ' << problem.clauses.size() << '\n';
    for (const auto& clause : problem.clauses) {
        for (const CnfLit& l : clause) out << (l.negated ? -(long)(l.var + 1) : (long)(l.var + 1)) << ' ';
        out << "0\n";
    }
}

}  // namespace deltarep
