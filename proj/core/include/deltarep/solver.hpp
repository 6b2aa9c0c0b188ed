#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace deltarep {

/// Literal over a 0-based variable index.
struct CnfLit {
    std::uint32_t var = 0;
    bool negated = false;

    bool operator==(const CnfLit&) const = default;
    auto operator<=>(const CnfLit&) const = default;
};

/// CNF plus the set of variables whose False-assignments are being paid for.
/// Variables outside any clause are legal; they cost nothing when True.
struct CnfProblem {
    std::uint32_t var_count = 0;
    std::vector<std::vector<CnfLit>> clauses;
    std::vector<bool> designated;  // size var_count; empty means "all"

    bool is_designated(std::uint32_t v) const { return designated.empty() || designated[v]; }
};

struct SolverSolution {
    std::vector<bool> assignment;                 // per variable
    std::vector<std::uint32_t> false_designated;  // sorted; the paid variables
    std::uint64_t cost = 0;                       // == false_designated.size()
    bool proved_optimal = false;
    std::uint64_t decisions = 0;
};

/// Minimizes the number of designated variables assigned False over the
/// satisfying assignments of a CNF.  The search is deterministic, so the
/// same problem always yields the same solution, but which of several
/// equal-cost optima it is remains unspecified.
///
/// Throws UnsatisfiableError when the CNF has no model, and BudgetError when
/// the time budget runs out before any feasible assignment was found.  When
/// the budget expires after an incumbent exists, that incumbent is returned
/// with proved_optimal = false.
class MinOnesSolver {
  public:
    virtual ~MinOnesSolver() = default;
    virtual SolverSolution solve(const CnfProblem& problem,
                                 std::optional<double> budget_seconds) = 0;
};

/// Default backend: DPLL branch and bound with unit propagation, cost-safe
/// pure-literal elimination, a clause-disjoint lower bound, and a greedy
/// cover for the initial incumbent.  Branches on the designated variable
/// occurring in the most unsatisfied clauses, trying True first.
class BranchBoundSolver final : public MinOnesSolver {
  public:
    SolverSolution solve(const CnfProblem& problem, std::optional<double> budget_seconds) override;
};

SolverSolution solve_min_ones(const CnfProblem& problem,
                              std::optional<double> budget_seconds = std::nullopt);

/// Reference implementation: tries every assignment.  Refuses problems with
/// more than `guard` variables (SizeGuardError).
SolverSolution solve_by_enumeration(const CnfProblem& problem, std::uint32_t guard = 25);

/// DIMACS cnf with one extension: "c designated <1-based vars...>" comment
/// lines name the variables that count towards the objective.  Files without
/// such lines designate every variable.
CnfProblem parse_dimacs(std::istream& in);
void write_dimacs(const CnfProblem& problem, std::ostream& out);

}  // namespace deltarep
