#include "deltarep/repair.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <unordered_set>

#include "deltarep/errors.hpp"
#include "deltarep/provenance.hpp"
#include "deltarep/solver.hpp"

namespace deltarep {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

RepairResult run_independent(const DeltaProgram& program, const DatabaseInstance& db,
                             std::optional<double> budget_seconds) {
    auto start = Clock::now();
    FormulaBuild fb = build_formula_profiled(program, db);

    auto convert_start = Clock::now();
    TupleCnf tc = negate_to_cnf(fb.formula);
    double convert_seconds = seconds_since(convert_start);

    auto solve_start = Clock::now();
    SolverSolution sol = solve_min_ones(tc.cnf, budget_seconds);
    double solve_seconds = seconds_since(solve_start);

    RepairResult res;
    res.semantics = SemanticsKind::independent;
    for (std::uint32_t v : sol.false_designated) res.deleted.push_back(tc.vars[v]);
    std::sort(res.deleted.begin(), res.deleted.end());
    res.optimal = sol.proved_optimal;
    res.rounds_or_steps = sol.decisions;
    res.stable = verify_stabilizing(program, db, res.deleted);
    res.provenance.clauses = fb.formula.clauses.size();
    res.provenance.variables = fb.formula.variables.size();
    res.phases = {{"eval", fb.eval_seconds + fb.store_seconds},
                  {"process_prov", convert_seconds},
                  {"solve", solve_seconds}};
    res.wall_seconds = seconds_since(start);
    return res;
}

namespace {

// Selection state over the provenance graph.  An assignment is disabled
// once a selected tuple other than its own head appears among its base
// images, or one of its delta inputs has left the graph; a deletion leaves
// the graph when every assignment deriving it is disabled and its tuple was
// not selected.
class GraphTraversal {
  public:
    GraphTraversal(const ProvenanceGraph& graph) : graph_(graph) {
        for (std::uint32_t i = 0; i < graph_.assignments.size(); ++i) {
            const GraphAssignment& a = graph_.assignments[i];
            alive_count_[a.head] += 1;
            std::set<TupleId> bases, deltas;
            for (const AtomImage& img : a.images)
                (img.is_delta ? deltas : bases).insert(img.id);
            for (TupleId id : bases) base_occ_[id].push_back(i);
            for (TupleId id : deltas) delta_occ_[id].push_back(i);
        }
        disabled_.assign(graph_.assignments.size(), false);
    }

    std::vector<TupleId> run() {
        std::map<std::uint32_t, std::vector<std::pair<TupleId, std::int64_t>>> by_layer;
        for (TupleId t : graph_.delta_nodes)
            by_layer[graph_.layer.at(t)].push_back({t, graph_.benefit.at(t)});

        // Benefits are fixed, so repeatedly selecting the best still-present
        // node of a layer is one sweep in (benefit desc, id asc) order:
        // anything ranked higher than the sweep position is already selected
        // or removed when the sweep reaches it.
        for (auto& [layer, nodes] : by_layer) {
            std::stable_sort(nodes.begin(), nodes.end(),
                             [](const auto& a, const auto& b) { return a.second > b.second; });
            for (const auto& [t, b] : nodes)
                if (!removed_.contains(t) && !selected_.contains(t)) select(t);
        }
        std::vector<TupleId> out(selected_.begin(), selected_.end());
        return out;  // std::set iterates sorted
    }

  private:
    void select(TupleId t) {
        selected_.insert(t);
        auto it = base_occ_.find(t);
        if (it == base_occ_.end()) return;
        for (std::uint32_t a : it->second)
            if (graph_.assignments[a].head != t) disable(a);
    }

    void disable(std::uint32_t a) {
        if (disabled_[a]) return;
        disabled_[a] = true;
        TupleId head = graph_.assignments[a].head;
        if (--alive_count_[head] == 0 && !selected_.contains(head)) remove(head);
    }

    void remove(TupleId t) {
        if (!removed_.insert(t).second) return;
        auto it = delta_occ_.find(t);
        if (it == delta_occ_.end()) return;
        for (std::uint32_t a : it->second) disable(a);
    }

    const ProvenanceGraph& graph_;
    std::map<TupleId, std::vector<std::uint32_t>> base_occ_, delta_occ_;
    std::map<TupleId, std::int64_t> alive_count_;
    std::vector<bool> disabled_;
    std::set<TupleId> selected_, removed_;
};

}  // namespace

RepairResult run_step_greedy(const DeltaProgram& program, const DatabaseInstance& db) {
    auto start = Clock::now();
    GraphBuild gb = build_graph_profiled(program, db);

    auto traverse_start = Clock::now();
    GraphTraversal traversal(gb.graph);
    std::vector<TupleId> deleted = traversal.run();
    double traverse_seconds = seconds_since(traverse_start);

    RepairResult res;
    res.semantics = SemanticsKind::step;
    res.deleted = std::move(deleted);
    res.rounds_or_steps = res.deleted.size();
    res.optimal = false;
    res.stable = verify_stabilizing(program, db, res.deleted);
    res.provenance.graph_nodes = gb.graph.base_nodes.size() + gb.graph.delta_nodes.size();
    res.provenance.graph_assignments = gb.graph.assignments.size();
    res.phases = {{"eval", gb.eval_seconds},
                  {"process_prov", gb.process_seconds},
                  {"traverse", traverse_seconds}};
    res.wall_seconds = seconds_since(start);
    return res;
}

namespace {

bool subset_of(const std::vector<TupleId>& a, const std::vector<TupleId>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

AllResults run_all(const DeltaProgram& program, const DatabaseInstance& db,
                   std::optional<double> budget_seconds) {
    AllResults all{.end_state = run_end(program, db),
                   .stage = run_stage(program, db),
                   .step = run_step_greedy(program, db),
                   .independent = run_independent(program, db, budget_seconds),
                   .comparison = {}};

    ComparisonReport& cmp = all.comparison;
    cmp.step_equals_stage = all.step.deleted == all.stage.deleted;
    cmp.independent_subset_of_stage = subset_of(all.independent.deleted, all.stage.deleted);
    cmp.independent_subset_of_step = subset_of(all.independent.deleted, all.step.deleted);
    cmp.stage_subset_of_end = subset_of(all.stage.deleted, all.end_state.deleted);
    cmp.step_subset_of_end = subset_of(all.step.deleted, all.end_state.deleted);
    cmp.end_size = all.end_state.deleted.size();
    cmp.stage_size = all.stage.deleted.size();
    cmp.step_size = all.step.deleted.size();
    cmp.independent_size = all.independent.deleted.size();

    if (!cmp.stage_subset_of_end)
        throw Error("internal: stage deletions escaped the end-state deletions");
    if (!cmp.step_subset_of_end)
        throw Error("internal: step deletions escaped the end-state deletions");
    return all;
}

std::optional<std::vector<Firing>> validate_step_realizability(const DeltaProgram& program,
                                                               const DatabaseInstance& db,
                                                               const std::vector<TupleId>& s,
                                                               std::uint64_t node_limit) {
    if (s.size() > 64) throw SizeGuardError("realizability search supports at most 64 deletions");
    std::vector<TupleId> sorted = s;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    // the final state does not depend on the order, so an unstable target can
    // never be the endpoint of a maximal firing sequence
    if (!verify_stabilizing(program, db, sorted)) return std::nullopt;

    const std::uint64_t full = sorted.size() == 64 ? ~0ull : (1ull << sorted.size()) - 1;
    std::unordered_set<std::uint64_t> failed;
    std::vector<std::pair<std::uint32_t, RuleAssignment>> chosen;  // (index into sorted, assignment)
    std::uint64_t nodes = 0;

    auto dfs = [&](auto&& self, std::uint64_t mask, const DatabaseInstance& state) -> bool {
        if (mask == full) return true;
        if (failed.contains(mask)) return false;
        if (++nodes > node_limit)
            throw SizeGuardError("realizability search exceeded the node limit");

        for (std::uint32_t i = 0; i < sorted.size(); ++i) {
            if (mask & (1ull << i)) continue;
            TupleId target = sorted[i];
            // deterministic pick: all enabled assignments deriving target,
            // smallest (rule, images) first
            std::optional<RuleAssignment> found;
            EvalState st = EvalState::of_instance(state);
            for (const DeltaRule& rule : program.rules) {
                if (rule.head.relation != target.relation) continue;
                enumerate_rule(rule, state, st, [&](const std::vector<AtomImage>& images) {
                    if (images[rule.head_body_atom].id != target) return true;
                    RuleAssignment cand;
                    cand.rule_id = rule.rule_id;
                    cand.atom_images = images;
                    cand.head = target;
                    if (!found || cand.rule_id < found->rule_id ||
                        (cand.rule_id == found->rule_id && cand.atom_images < found->atom_images))
                        found = std::move(cand);
                    return true;
                });
                if (found) break;  // rules scanned in id order; first rule wins
            }
            if (!found) continue;
            found->bindings = bindings_of(program.rules[found->rule_id], state, found->atom_images);
            chosen.push_back({i, *found});
            DatabaseInstance next = apply_deletion(state, std::vector<TupleId>{target});
            if (self(self, mask | (1ull << i), next)) return true;
            chosen.pop_back();
        }
        failed.insert(mask);
        return false;
    };

    if (!dfs(dfs, 0, db)) return std::nullopt;
    std::vector<Firing> seq;
    for (auto& [i, a] : chosen) seq.push_back(Firing{a.rule_id, a.bindings});
    return seq;
}

}  // namespace deltarep
