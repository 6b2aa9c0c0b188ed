#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "deltarep/instance.hpp"
#include "deltarep/repair_result.hpp"
#include "deltarep/rule.hpp"

namespace deltarep {

/// Which tuple a body atom matched; delta atoms match the deleted side.
struct AtomImage {
    TupleId id;
    bool is_delta = false;

    bool operator==(const AtomImage&) const = default;
    auto operator<=>(const AtomImage&) const = default;
};

/// One satisfying assignment of a rule body.
struct RuleAssignment {
    std::uint32_t rule_id = 0;
    std::map<std::string, Value> bindings;
    std::vector<AtomImage> atom_images;  // per body atom, source order
    TupleId head;                        // tuple whose deletion the firing derives
};

/// Exhaustive satisfying assignments of one rule (or all rules) against the
/// instance's current live/deleted sides, ordered by atom-image vectors.
std::vector<RuleAssignment> find_assignments(const DeltaRule& rule, const DatabaseInstance& db);
std::vector<RuleAssignment> find_assignments(const DeltaProgram& program,
                                             const DatabaseInstance& db);

/// True when no rule has a satisfying assignment.
bool is_stable(const DeltaProgram& program, const DatabaseInstance& db);

/// Like is_stable but hands back one enabled assignment when unstable.
std::optional<RuleAssignment> stability_witness(const DeltaProgram& program,
                                                const DatabaseInstance& db);

/// Does deleting exactly `s` leave the database stable?
/// Throws UnknownTupleError when `s` contains a non-live tuple.
bool verify_stabilizing(const DeltaProgram& program, const DatabaseInstance& db,
                        const std::vector<TupleId>& s);

/// Derive-then-delete: the live side stays frozen while deletions accumulate
/// to a fixpoint; everything derived is deleted at once at the end.
RepairResult run_end(const DeltaProgram& program, const DatabaseInstance& db);

/// Round-based: each round derives every deletion enabled by the previous
/// round's state, then applies them before the next round.
RepairResult run_stage(const DeltaProgram& program, const DatabaseInstance& db);

/// One rule firing: which rule, and a concrete value for every variable.
struct Firing {
    std::uint32_t rule_id = 0;
    std::map<std::string, Value> bindings;
};

/// Applies firings one at a time, updating the state after each.  Throws
/// InvalidFiringError when a firing is not enabled in the state it meets.
RepairResult replay_step_sequence(const DeltaProgram& program, const DatabaseInstance& db,
                                  const std::vector<Firing>& sequence);

// ---- internals shared with provenance construction ----

/// Live/deleted masks per relation, indexed like DatabaseInstance rows.
struct EvalState {
    std::vector<std::vector<bool>> base;
    std::vector<std::vector<bool>> delta;

    static EvalState of_instance(const DatabaseInstance& db);
    static EvalState everything(const DatabaseInstance& db);  // both sides full
};

/// Enumerates satisfying assignments of `rule` where base atoms match
/// st.base and delta atoms match st.delta.  Images arrive in body source
/// order; returning false from the sink stops the enumeration early.
/// Returns false iff the sink stopped it.
bool enumerate_rule(const DeltaRule& rule, const DatabaseInstance& db, const EvalState& st,
                    const std::function<bool(const std::vector<AtomImage>&)>& sink);

/// Bindings induced by a concrete atom-image vector.
std::map<std::string, Value> bindings_of(const DeltaRule& rule, const DatabaseInstance& db,
                                         const std::vector<AtomImage>& images);

/// Fixpoint bookkeeping shared by run_end, run_stage and the provenance
/// graph: which tuples were derived, and in which round each first appeared.
struct FixpointTrace {
    std::vector<TupleId> deleted;                              // sorted
    std::map<TupleId, std::uint32_t> layer;                    // 1-based round
    std::uint32_t rounds = 0;
};

FixpointTrace trace_end_fixpoint(const DeltaProgram& program, const DatabaseInstance& db);

}  // namespace deltarep
