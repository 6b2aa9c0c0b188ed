#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <sstream>

#include "deltarep/errors.hpp"
#include "deltarep/solver.hpp"

using namespace deltarep;

static CnfLit pos(std::uint32_t v) { return CnfLit{v, false}; }
static CnfLit neg(std::uint32_t v) { return CnfLit{v, true}; }

static bool satisfies(const CnfProblem& p, const std::vector<bool>& a) {
    for (const auto& clause : p.clauses) {
        bool sat = false;
        for (const CnfLit& l : clause) sat |= a[l.var] != l.negated;
        if (!sat) return false;
    }
    return true;
}

TEST_CASE("implication chains are closed by propagation alone") {
    CnfProblem p;
    p.var_count = 3;
    p.clauses = {{pos(0)}, {neg(0), pos(1)}, {neg(1), pos(2)}};
    auto s = solve_min_ones(p);
    CHECK(s.cost == 0);
    CHECK(s.proved_optimal);
    CHECK(s.decisions == 0);
    CHECK(s.assignment == std::vector<bool>{true, true, true});
}

TEST_CASE("positive pure literals are free and taken") {
    CnfProblem p;
    p.var_count = 3;
    p.clauses = {{pos(0), pos(1)}, {pos(0), neg(2)}};
    auto s = solve_min_ones(p);
    CHECK(s.cost == 0);
    CHECK(s.decisions == 0);
    CHECK(s.assignment[0]);
}

TEST_CASE("a negative pure designated variable is not forced to pay") {
    CnfProblem p;
    p.var_count = 2;
    p.clauses = {{neg(0), neg(1)}};
    auto s = solve_min_ones(p);
    CHECK(s.cost == 1);  // forcing both pures False would pay twice
    CHECK(s.proved_optimal);
    CHECK(s.decisions == 0);  // greedy incumbent meets the lower bound
}

TEST_CASE("non-designated variables fall freely either way") {
    CnfProblem p;
    p.var_count = 2;
    p.designated = {true, false};
    p.clauses = {{neg(1)}};
    auto s = solve_min_ones(p);
    CHECK(s.cost == 0);
    CHECK(s.false_designated.empty());
    CHECK_FALSE(s.assignment[1]);
    CHECK(s.assignment[0]);  // unconstrained designated variables stay True
}

TEST_CASE("tautologies and duplicate literals do not confuse the search") {
    CnfProblem p;
    p.var_count = 2;
    p.clauses = {{pos(0), neg(0), pos(1)}, {neg(1), neg(1)}};
    auto s = solve_min_ones(p);
    CHECK(s.cost == 1);
    CHECK(s.false_designated == std::vector<std::uint32_t>{1});
}

TEST_CASE("unsatisfiable inputs are reported as such") {
    CnfProblem direct;
    direct.var_count = 1;
    direct.clauses = {{pos(0)}, {neg(0)}};
    CHECK_THROWS_AS(solve_min_ones(direct), UnsatisfiableError);

    CnfProblem empty_clause;
    empty_clause.var_count = 1;
    empty_clause.clauses = {{}};
    CHECK_THROWS_AS(solve_min_ones(empty_clause), UnsatisfiableError);
    CHECK_THROWS_AS(solve_by_enumeration(empty_clause), UnsatisfiableError);

    CnfProblem out_of_range;
    out_of_range.var_count = 1;
    out_of_range.clauses = {{pos(5)}};
    CHECK_THROWS_AS(solve_min_ones(out_of_range), Error);
}

TEST_CASE("solutions are deterministic across repeated calls") {
    CnfProblem p;
    p.var_count = 4;
    p.clauses = {{neg(0), neg(1)}, {neg(1), neg(2)}, {neg(2), neg(3)}, {neg(3), neg(0)}};
    auto a = solve_min_ones(p);
    auto b = solve_min_ones(p);
    CHECK(a.assignment == b.assignment);
    CHECK(a.false_designated == b.false_designated);
    CHECK(a.cost == 2);  // opposite corners of the 4-cycle
}

// Pigeonhole: `pigeons` at-least-one clauses plus per-hole exclusivity.
// Unsatisfiable whenever pigeons > holes, and expensive to refute.
static CnfProblem pigeonhole(std::uint32_t pigeons, std::uint32_t holes) {
    CnfProblem p;
    p.var_count = pigeons * holes;
    auto v = [&](std::uint32_t pg, std::uint32_t h) { return pg * holes + h; };
    for (std::uint32_t pg = 0; pg < pigeons; ++pg) {
        std::vector<CnfLit> clause;
        for (std::uint32_t h = 0; h < holes; ++h) clause.push_back(pos(v(pg, h)));
        p.clauses.push_back(clause);
    }
    for (std::uint32_t h = 0; h < holes; ++h)
        for (std::uint32_t a = 0; a < pigeons; ++a)
            for (std::uint32_t b = a + 1; b < pigeons; ++b)
                p.clauses.push_back({neg(v(a, h)), neg(v(b, h))});
    return p;
}

TEST_CASE("an expired budget with no feasible assignment in hand is an error") {
    CHECK_THROWS_AS(solve_min_ones(pigeonhole(10, 9), 0.0), BudgetError);
}

TEST_CASE("an expired budget returns the incumbent unproved") {
    // 25 disjoint triangles: the greedy warm start already pays the optimal
    // two per triangle, but proving that takes far longer than the budget.
    CnfProblem p;
    p.var_count = 75;
    for (std::uint32_t t = 0; t < 25; ++t) {
        std::uint32_t a = 3 * t, b = 3 * t + 1, c = 3 * t + 2;
        p.clauses.push_back({neg(a), neg(b)});
        p.clauses.push_back({neg(a), neg(c)});
        p.clauses.push_back({neg(b), neg(c)});
    }
    auto s = solve_min_ones(p, 0.0);
    CHECK_FALSE(s.proved_optimal);
    CHECK(s.cost == 50);
    CHECK(satisfies(p, s.assignment));

    // At three triangles the clause-disjoint bound can close the gap, so a
    // real budget yields a proof of the same two-per-triangle shape.
    CnfProblem small;
    small.var_count = 9;
    for (std::uint32_t t = 0; t < 3; ++t) {
        std::uint32_t a = 3 * t, b = 3 * t + 1, c = 3 * t + 2;
        small.clauses.push_back({neg(a), neg(b)});
        small.clauses.push_back({neg(a), neg(c)});
        small.clauses.push_back({neg(b), neg(c)});
    }
    auto relaxed = solve_min_ones(small, 60.0);
    CHECK(relaxed.proved_optimal);
    CHECK(relaxed.cost == 6);
}

TEST_CASE("satisfiable pigeon assignments are found and proved") {
    auto s = solve_min_ones(pigeonhole(3, 3));
    CHECK(s.proved_optimal);
    CHECK(s.cost == 6);  // each pigeon in one hole, six vars False
}

TEST_CASE("the enumeration backend refuses oversized problems") {
    CnfProblem p;
    p.var_count = 26;
    CHECK_THROWS_AS(solve_by_enumeration(p), SizeGuardError);
    CHECK_THROWS_AS(solve_by_enumeration(p, 10), SizeGuardError);
    p.var_count = 5;
    CHECK(solve_by_enumeration(p, 10).cost == 0);
}

TEST_CASE("search and enumeration agree on random problems") {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 150; ++round) {
        CnfProblem p;
        p.var_count = 1 + static_cast<std::uint32_t>(rng() % 12);
        std::size_t clause_count = 1 + rng() % (3 * p.var_count);
        for (std::size_t c = 0; c < clause_count; ++c) {
            std::vector<CnfLit> clause;
            std::size_t len = 1 + rng() % 3;
            for (std::size_t i = 0; i < len; ++i)
                clause.push_back(CnfLit{static_cast<std::uint32_t>(rng() % p.var_count),
                                        (rng() & 1) != 0});
            p.clauses.push_back(clause);
        }
        if (round % 3 == 0) {
            p.designated.assign(p.var_count, false);
            for (std::uint32_t v = 0; v < p.var_count; ++v) p.designated[v] = (rng() & 1) != 0;
        }

        CAPTURE(round);
        std::optional<SolverSolution> reference;
        try {
            reference = solve_by_enumeration(p);
        } catch (const UnsatisfiableError&) {
            CHECK_THROWS_AS(solve_min_ones(p), UnsatisfiableError);
            continue;
        }
        auto s = solve_min_ones(p);
        CHECK(s.cost == reference->cost);
        CHECK(s.proved_optimal);
        CHECK(satisfies(p, s.assignment));
        std::uint64_t falses = 0;
        for (std::uint32_t v = 0; v < p.var_count; ++v)
            falses += p.is_designated(v) && !s.assignment[v];
        CHECK(falses == s.cost);
    }
}

TEST_CASE("DIMACS text round-trips problems and their designations") {
    CnfProblem p;
    p.var_count = 4;
    p.clauses = {{pos(0), neg(2)}, {pos(3)}};
    p.designated = {true, false, true, false};

    std::ostringstream out;
    write_dimacs(p, out);
    std::istringstream in(out.str());
    CnfProblem back = parse_dimacs(in);
    CHECK(back.var_count == p.var_count);
    CHECK(back.clauses == p.clauses);
    for (std::uint32_t v = 0; v < p.var_count; ++v)
        CHECK(back.is_designated(v) == p.is_designated(v));

    // no designated lines at all means every variable counts
    std::istringstream plain("p cnf 2 1\n1 -2 0\n");
    CnfProblem all = parse_dimacs(plain);
    CHECK(all.is_designated(0));
    CHECK(all.is_designated(1));
    CHECK(all.clauses == std::vector<std::vector<CnfLit>>{{pos(0), neg(1)}});
}

TEST_CASE("malformed DIMACS is rejected") {
    std::istringstream no_header("1 2 0\n");
    CHECK_THROWS_AS(parse_dimacs(no_header), IoError);
    std::istringstream bad_header("p cnf x y\n");
    CHECK_THROWS_AS(parse_dimacs(bad_header), IoError);
    std::istringstream out_of_range("p cnf 2 1\n3 0\n");
    CHECK_THROWS_AS(parse_dimacs(out_of_range), IoError);
    std::istringstream empty("c nothing\n");
    CHECK_THROWS_AS(parse_dimacs(empty), IoError);
}
