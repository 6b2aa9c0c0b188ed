#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "deltarep/eval.hpp"
#include "deltarep/instance.hpp"
#include "deltarep/repair_result.hpp"
#include "deltarep/rule.hpp"

namespace deltarep {

/// Globally minimum stabilizing deletion set, found by negating the
/// deletion provenance formula and solving min-ones over it.  `optimal` in
/// the result reflects whether the solver finished inside the budget.
RepairResult run_independent(const DeltaProgram& program, const DatabaseInstance& db,
                             std::optional<double> budget_seconds = std::nullopt);

/// Greedy small-deletion firing order over the provenance graph: walk the
/// layers in order, repeatedly selecting the still-available deletion with
/// the highest benefit (ties to the smallest id) and pruning the subgraph
/// that selection disables.
RepairResult run_step_greedy(const DeltaProgram& program, const DatabaseInstance& db);

struct ComparisonReport {
    bool step_equals_stage = false;
    bool independent_subset_of_stage = false;
    bool independent_subset_of_step = false;
    bool stage_subset_of_end = false;  // always true; run_all throws otherwise
    bool step_subset_of_end = false;   // always true; run_all throws otherwise
    std::size_t end_size = 0, stage_size = 0, step_size = 0, independent_size = 0;
};

struct AllResults {
    RepairResult end_state, stage, step, independent;
    ComparisonReport comparison;
};

/// Runs all four semantics and reports how their deletion sets relate.
/// The two containments that hold by construction are asserted: a violation
/// raises Error, since it can only mean an engine defect.
AllResults run_all(const DeltaProgram& program, const DatabaseInstance& db,
                   std::optional<double> budget_seconds = std::nullopt);

/// Searches for an enabled one-at-a-time firing order that deletes exactly
/// `s`.  Returns the sequence if one exists, nullopt if `s` cannot be
/// realized (including when deleting `s` does not stabilize the database).
/// Throws SizeGuardError past `node_limit` search states or when `s` has
/// more than 64 tuples.
std::optional<std::vector<Firing>> validate_step_realizability(const DeltaProgram& program,
                                                               const DatabaseInstance& db,
                                                               const std::vector<TupleId>& s,
                                                               std::uint64_t node_limit = 100000);

}  // namespace deltarep
