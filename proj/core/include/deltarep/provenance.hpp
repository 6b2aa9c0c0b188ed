#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "deltarep/eval.hpp"
#include "deltarep/instance.hpp"
#include "deltarep/rule.hpp"
#include "deltarep/solver.hpp"

namespace deltarep {

/// One conjunct of a derivation clause.  `delta` literals stand for the
/// deleted image of the tuple and are the negated ones: a clause fires when
/// all its base tuples are live and all its delta tuples are deleted.
struct ProvLiteral {
    TupleId id;
    bool delta = false;

    bool operator==(const ProvLiteral&) const = default;
    auto operator<=>(const ProvLiteral&) const = default;
};

struct ProvClause {
    std::vector<ProvLiteral> literals;  // sorted, duplicate-free

    bool operator==(const ProvClause&) const = default;
    auto operator<=>(const ProvClause&) const = default;
};

/// Deletion provenance of a whole instance: the disjunction of every rule
/// body grounding, where base atoms range over the live tuples and delta
/// atoms range over the deleted image of *every* live tuple (deletions that
/// merely could happen, not only ones some evaluation derives).  Groundings
/// whose clause would mention a tuple on both sides are impossible and are
/// dropped; duplicate clauses collapse.
///
/// An assignment of live/deleted to the variables avoids every clause
/// exactly when the corresponding deletion set leaves the database stable.
struct ProvenanceFormula {
    std::vector<TupleId> variables;   // every originally live tuple, sorted
    std::vector<ProvClause> clauses;  // canonical (sorted) order
};

/// Pre-condition: db has no deleted tuples yet.
ProvenanceFormula build_formula(const DeltaProgram& program, const DatabaseInstance& db);

/// Same result with phase timings split out: grounding enumeration vs
/// storing the canonical clause set.  Both are provenance evaluation time;
/// converting to CNF afterwards is a separate, cheap step.
struct FormulaBuild {
    ProvenanceFormula formula;
    double eval_seconds = 0.0;
    double store_seconds = 0.0;
};
FormulaBuild build_formula_profiled(const DeltaProgram& program, const DatabaseInstance& db);

/// CNF of the negated formula: one CNF clause per derivation clause with
/// base literals negated and delta literals positive.  Variable v of the CNF
/// is vars[v]; all variables are designated, so the min-ones objective
/// counts deleted tuples.
struct TupleCnf {
    CnfProblem cnf;
    std::vector<TupleId> vars;
};
TupleCnf negate_to_cnf(const ProvenanceFormula& formula);

/// Canonical text of the negated CNF, one "(lit | lit | ...)" line per
/// clause with "-" marking negation, tuples named by stable label.
std::string cnf_to_string(const ProvenanceFormula& formula, const DatabaseInstance& db);

/// DIMACS of the negated CNF with "c var <n> <label>" name comments and the
/// designated-variable header.
void write_formula_dimacs(const ProvenanceFormula& formula, const DatabaseInstance& db,
                          std::ostream& out);

/// One satisfied rule body in the fully-derived state, drawn as a hyperedge
/// from its images to the deletion it derives.
struct GraphAssignment {
    std::uint32_t rule_id = 0;
    std::vector<AtomImage> images;  // body source order
    TupleId head;
};

/// Provenance of the derive-then-delete fixpoint: every assignment present
/// once derivation has finished, each deleted tuple annotated with the round
/// it first appeared in (its layer), and each participating live tuple with
/// a benefit score: in how many assignments it appears as a base image,
/// minus how many its deleted image appears in (both counted set-wise).
struct ProvenanceGraph {
    std::vector<TupleId> base_nodes;   // sorted
    std::vector<TupleId> delta_nodes;  // sorted; the fixpoint's deletions
    std::vector<GraphAssignment> assignments;
    std::map<TupleId, std::uint32_t> layer;    // delta node -> 1-based round
    std::map<TupleId, std::int64_t> benefit;   // base node -> score
    std::uint32_t rounds = 0;
};

/// Pre-condition: db has no deleted tuples yet.
ProvenanceGraph build_graph(const DeltaProgram& program, const DatabaseInstance& db);

struct GraphBuild {
    ProvenanceGraph graph;
    double eval_seconds = 0.0;
    double process_seconds = 0.0;
};
GraphBuild build_graph_profiled(const DeltaProgram& program, const DatabaseInstance& db);

/// Graphviz dot: tuple nodes labelled with benefit, dashed boxes for
/// deletions labelled with layer, point nodes for assignments.
void write_graph_dot(const ProvenanceGraph& graph, const DatabaseInstance& db, std::ostream& out);

}  // namespace deltarep
