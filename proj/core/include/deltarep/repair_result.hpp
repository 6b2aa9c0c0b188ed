#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "deltarep/instance.hpp"

namespace deltarep {

enum class SemanticsKind { end_state, stage, step, independent };

const char* to_string(SemanticsKind s);

struct ProvenanceStats {
    std::size_t clauses = 0;
    std::size_t variables = 0;
    std::size_t graph_nodes = 0;
    std::size_t graph_assignments = 0;
};

struct PhaseTiming {
    std::string name;  // "eval", "process_prov", "solve", "traverse"
    double seconds = 0.0;
};

/// Outcome of running one deletion semantics over an instance.
///
/// `optimal` means the deleted set is known to be minimum for that
/// semantics: always true for the end and stage fixpoints (their outcome is
/// unique), true for the independent semantics when the solver finished with
/// a proof, false for the greedy step traversal and for replayed sequences.
///
/// `rounds_or_steps` counts fixpoint rounds (end, stage), firings (step),
/// or solver branch decisions (independent).
struct RepairResult {
    SemanticsKind semantics = SemanticsKind::end_state;
    std::vector<TupleId> deleted;  // sorted by id
    bool stable = false;
    bool optimal = false;
    std::uint64_t rounds_or_steps = 0;
    double wall_seconds = 0.0;
    ProvenanceStats provenance;
    std::vector<PhaseTiming> phases;
};

}  // namespace deltarep
