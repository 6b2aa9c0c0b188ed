#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "deltarep/instance.hpp"
#include "deltarep/rule.hpp"

namespace deltarep {

/// Smallest stabilizing set by direct subset search: cardinality 0, 1, 2,
/// ... and lexicographic id order within a cardinality, so the returned set
/// is the unique (size, lex) minimum.  Refuses instances with more than
/// `guard` live tuples.
std::vector<TupleId> brute_force_independent(const DeltaProgram& program,
                                             const DatabaseInstance& db,
                                             std::uint32_t guard = 18);

/// Minimum outcome over all maximal one-firing-at-a-time runs, by exhaustive
/// state search with memoization (a state is its deleted set).  Ties break
/// to the lexicographically smallest set.  Throws SizeGuardError after
/// `state_guard` distinct states.
std::vector<TupleId> brute_force_step(const DeltaProgram& program, const DatabaseInstance& db,
                                      std::uint64_t state_guard = 200000);

struct GeneratedInstance {
    DatabaseInstance db;
    DeltaProgram program;
};

/// Seed-deterministic benchmark families:
///   "cascade-depth-K" (alias "cascade", K=5): K chained relations where one
///       seeded deletion propagates down the chain; every semantics deletes
///       the same set.
///   "join-chain-K" (alias "join-chain", K=3): a single rule joining K
///       relations, each level half the size of the one above.
/// `scale` is the approximate total tuple count; must be positive.
GeneratedInstance generate_instance(const std::string& template_name, std::uint64_t scale,
                                    std::uint64_t seed);

struct UndirectedGraph {
    std::uint32_t vertex_count = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
};

enum class VcVariant {
    independent_three_rule,  // covered-edge rule plus the two edge-deletion compensations
    step_single_rule,        // covered-edge rule only
};

/// Encodes minimum vertex cover as a deletion-repair instance: relations
/// VC(v) for vertices and E(a, b) holding both directions of each edge.
/// Rejects self loops and out-of-range endpoints.
GeneratedInstance encode_vertex_cover(const UndirectedGraph& graph, VcVariant variant);

}  // namespace deltarep
