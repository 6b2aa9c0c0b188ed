#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "deltarep/errors.hpp"
#include "deltarep/eval.hpp"
#include "deltarep/provenance.hpp"

#include "support/fixtures.hpp"
#include "support/random_instances.hpp"

using namespace deltarep;
using testsupport::load_case;
using testsupport::tid;

TEST_CASE("the deletion formula of the running example, clause by clause") {
    auto c = load_case("running_example");
    auto f = build_formula(c.program, c.db);
    CHECK(f.variables.size() == 13);  // every live tuple is a variable
    CHECK(f.clauses.size() == 7);

    // Delta atoms range over deletions that *could* happen, so the clause
    // where rule 1 consumes the never-derived -Grant:0 is present, and the
    // shared body of rules 2 and 3 collapses to one clause per grounding.
    CHECK(cnf_to_string(f, c.db) ==
          "(Grant:0 | -AuthGrant:0 | -Author:0)\n"
          "(-Grant:1)\n"
          "(Grant:1 | -AuthGrant:1 | -Author:1)\n"
          "(Grant:1 | -AuthGrant:2 | -Author:2)\n"
          "(Author:1 | -Writes:0 | -Pub:0)\n"
          "(Author:2 | -Writes:1 | -Pub:1)\n"
          "(-Cite:0 | -Writes:0 | -Writes:1 | Pub:0)\n");
}

TEST_CASE("negation turns derivation clauses into a designated min-ones CNF") {
    auto c = load_case("running_example");
    auto tc = negate_to_cnf(build_formula(c.program, c.db));
    CHECK(tc.cnf.var_count == 13);
    CHECK(tc.vars.size() == 13);
    CHECK(tc.cnf.clauses.size() == 7);
    for (std::uint32_t v = 0; v < tc.cnf.var_count; ++v) CHECK(tc.cnf.is_designated(v));

    // the unit clause forcing the defunded grant out
    bool found_unit = false;
    for (const auto& cl : tc.cnf.clauses)
        if (cl.size() == 1) {
            found_unit = true;
            CHECK(cl[0].negated);
            CHECK(tc.vars[cl[0].var] == tid(c.db, "Grant:1"));
        }
    CHECK(found_unit);
}

TEST_CASE("the DIMACS dump names variables and designates all of them") {
    auto c = load_case("running_example");
    std::ostringstream out;
    write_formula_dimacs(build_formula(c.program, c.db), c.db, out);
    std::string s = out.str();
    CHECK(s.find("c var 1 Grant:0\n") != std::string::npos);
    CHECK(s.find("c var 13 Pub:1\n") != std::string::npos);
    CHECK(s.find("p cnf 13 7\n") != std::string::npos);
    CHECK(s.find("c designated") != std::string::npos);
    CHECK(s.find("\n-2 0\n") != std::string::npos);       // -Grant:1 alone
    CHECK(s.find("\n1 -3 -6 0\n") != std::string::npos);  // Grant:0 | -AuthGrant:0 | -Author:0
}

TEST_CASE("the fixpoint graph carries layers and benefits") {
    auto c = load_case("running_example");
    auto g = build_graph(c.program, c.db);

    CHECK(g.delta_nodes.size() == 8);
    CHECK(g.base_nodes.size() == 10);
    CHECK(g.assignments.size() == 8);
    CHECK(g.rounds == 4);

    CHECK(g.layer.at(tid(c.db, "Grant:1")) == 1);
    CHECK(g.layer.at(tid(c.db, "Author:1")) == 2);
    CHECK(g.layer.at(tid(c.db, "Writes:0")) == 3);
    CHECK(g.layer.at(tid(c.db, "Pub:1")) == 3);
    CHECK(g.layer.at(tid(c.db, "Cite:0")) == 4);

    CHECK(g.benefit.at(tid(c.db, "Writes:0")) == 3);
    CHECK(g.benefit.at(tid(c.db, "Writes:1")) == 3);
    CHECK(g.benefit.at(tid(c.db, "Pub:1")) == 2);
    CHECK(g.benefit.at(tid(c.db, "Pub:0")) == 1);
    CHECK(g.benefit.at(tid(c.db, "Cite:0")) == 1);
    CHECK(g.benefit.at(tid(c.db, "AuthGrant:1")) == 1);
    CHECK(g.benefit.at(tid(c.db, "AuthGrant:2")) == 1);
    CHECK(g.benefit.at(tid(c.db, "Grant:1")) == -1);
    CHECK(g.benefit.at(tid(c.db, "Author:1")) == -1);
    CHECK(g.benefit.at(tid(c.db, "Author:2")) == -1);

    // an assignment's inputs count once each, even when an atom repeats
    for (const auto& a : g.assignments)
        if (a.rule_id == 4) CHECK(a.head == tid(c.db, "Cite:0"));
}

TEST_CASE("the dot rendering mentions every node with its annotation") {
    auto c = load_case("running_example");
    std::ostringstream out;
    write_graph_dot(build_graph(c.program, c.db), c.db, out);
    std::string s = out.str();
    CHECK(s.find("digraph provenance") != std::string::npos);
    CHECK(s.find("\"Writes:0\" [label=\"Writes:0\\nbenefit 3\"]") != std::string::npos);
    CHECK(s.find("\"-Grant:1\" [label=\"-Grant:1\\nlayer 1\"") != std::string::npos);
    CHECK(s.find("\"-Cite:0\" [label=\"-Cite:0\\nlayer 4\"") != std::string::npos);
    CHECK(s.find("-> \"-Grant:1\";") != std::string::npos);
}

TEST_CASE("stable instances produce empty deltas and a quiet formula") {
    auto s = load_case("stable_example");
    auto f = build_formula(s.program, s.db);
    CHECK(f.variables.size() == 3);
    CHECK(f.clauses.empty());  // the guard x = 99 never holds

    auto g = build_graph(s.program, s.db);
    CHECK(g.delta_nodes.empty());
    CHECK(g.assignments.empty());
    CHECK(g.rounds == 0);

    DeltaProgram empty;
    auto f2 = build_formula(empty, s.db);
    CHECK(f2.clauses.empty());
}

TEST_CASE("builders insist on an instance without prior deletions") {
    auto c = load_case("running_example");
    auto db = apply_deletion(c.db, {tid(c.db, "Grant:1")});
    CHECK_THROWS_AS(build_formula(c.program, db), Error);
    CHECK_THROWS_AS(build_graph(c.program, db), Error);
}

static bool satisfies(const CnfProblem& cnf, const std::vector<bool>& assignment) {
    for (const auto& clause : cnf.clauses) {
        bool sat = false;
        for (const auto& lit : clause) sat |= assignment[lit.var] != lit.negated;
        if (!sat) return false;
    }
    return true;
}

TEST_CASE("models of the negated formula are exactly the stabilizing sets") {
    std::size_t checked = 0;
    for (std::uint64_t seed = 0; checked < 40; ++seed) {
        auto rc = testsupport::make_random_case(seed);
        std::size_t n = rc.db.live_count();
        if (n == 0 || n > 10) continue;
        auto tc = negate_to_cnf(build_formula(rc.program, rc.db));
        REQUIRE(tc.vars.size() == n);

        for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
            std::vector<bool> assignment(n);
            std::vector<TupleId> deleted;
            for (std::size_t v = 0; v < n; ++v) {
                assignment[v] = !(mask & (1ull << v));  // bit set = deleted
                if (!assignment[v]) deleted.push_back(tc.vars[v]);
            }
            CAPTURE(seed);
            CAPTURE(mask);
            CHECK(satisfies(tc.cnf, assignment) ==
                  verify_stabilizing(rc.program, rc.db, deleted));
        }
        ++checked;
    }
}
