#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "deltarep/errors.hpp"
#include "deltarep/oracles.hpp"
#include "deltarep/repair.hpp"
#include "deltarep/rule.hpp"

#include "support/fixtures.hpp"

using namespace deltarep;
using testsupport::labels_of;
using testsupport::load_case;

TEST_CASE("subset search confirms the minimum repair of the running example") {
    auto c = load_case("running_example");
    auto s = brute_force_independent(c.program, c.db);
    CHECK(labels_of(c.db, s) ==
          std::vector<std::string>{"Grant:1", "AuthGrant:1", "AuthGrant:2"});
    CHECK_THROWS_AS(brute_force_independent(c.program, c.db, 5), SizeGuardError);
}

TEST_CASE("state search confirms the minimum firing order of the running example") {
    auto c = load_case("running_example");
    auto s = brute_force_step(c.program, c.db);
    CHECK(labels_of(c.db, s) ==
          std::vector<std::string>{"Grant:1", "Author:1", "Author:2", "Writes:0", "Writes:1"});
    CHECK_THROWS_AS(brute_force_step(c.program, c.db, 1), SizeGuardError);

    auto stable = load_case("stable_example");
    CHECK(brute_force_step(stable.program, stable.db).empty());
    CHECK(brute_force_independent(stable.program, stable.db).empty());
}

TEST_CASE("generated instances are reproducible from their seed") {
    for (const char* name : {"cascade", "join-chain-2"}) {
        auto a = generate_instance(name, 60, 42);
        auto b = generate_instance(name, 60, 42);
        CHECK(to_string(a.program) == to_string(b.program));
        REQUIRE(a.db.relation_count() == b.db.relation_count());
        for (std::uint32_t r = 0; r < a.db.relation_count(); ++r) {
            auto ra = a.db.rows(r);
            auto rb = b.db.rows(r);
            REQUIRE(ra.size() == rb.size());
            for (std::size_t i = 0; i < ra.size(); ++i) CHECK(ra[i].values == rb[i].values);
        }
    }
}

TEST_CASE("the cascade family deletes the same set under every semantics") {
    auto g = generate_instance("cascade", 100, 7);
    CHECK(g.db.relation_count() == 5);
    CHECK(g.db.live_count() == 100);
    CHECK(g.program.rules.size() == 5);

    auto all = run_all(g.program, g.db);
    CHECK(all.end_state.deleted.size() == 41);  // seed plus ten linked per level
    CHECK(all.stage.deleted == all.end_state.deleted);
    CHECK(all.step.deleted == all.end_state.deleted);
    CHECK(all.independent.deleted == all.end_state.deleted);
    CHECK(all.comparison.step_equals_stage);
    CHECK(all.comparison.independent_subset_of_stage);
}

TEST_CASE("cascade depth is adjustable through the template name") {
    auto g = generate_instance("cascade-depth-2", 40, 7);
    CHECK(g.db.relation_count() == 2);
    CHECK(g.program.rules.size() == 2);
    CHECK(g.db.live_count() == 40);
}

TEST_CASE("the join chain separates the global minimum from the fixpoints") {
    auto g = generate_instance("join-chain-3", 16, 1);
    CHECK(g.db.relation_count() == 3);
    CHECK(g.db.rows(0).size() == 8);
    CHECK(g.db.rows(1).size() == 4);
    CHECK(g.db.rows(2).size() == 2);
    CHECK(g.program.rules.size() == 1);

    auto all = run_all(g.program, g.db);
    CHECK(all.end_state.deleted.size() == 8);  // the whole head relation
    CHECK(all.stage.deleted.size() == 8);
    CHECK(all.step.deleted.size() == 8);       // firings can only delete heads
    CHECK(all.independent.deleted.size() == 2);  // the smallest joined relation
    CHECK_FALSE(all.comparison.independent_subset_of_stage);
}

TEST_CASE("template lookup is strict about names and bounds") {
    CHECK_THROWS_AS(generate_instance("cascade", 0, 1), Error);
    CHECK_THROWS_AS(generate_instance("waterfall", 10, 1), Error);
    CHECK_THROWS_AS(generate_instance("cascade-depth-1", 10, 1), Error);
    CHECK_THROWS_AS(generate_instance("cascade-depth-99", 10, 1), Error);
    CHECK_THROWS_AS(generate_instance("cascade-depth-x", 10, 1), Error);
    CHECK_THROWS_AS(generate_instance("join-chain-0", 10, 1), Error);
    CHECK_THROWS_AS(generate_instance("join-chain-9", 10, 1), Error);
}

TEST_CASE("vertex covers become deletion repairs") {
    UndirectedGraph single{2, {{0, 1}}};
    auto three = encode_vertex_cover(single, VcVariant::independent_three_rule);
    CHECK(three.program.rules.size() == 3);
    CHECK(three.db.rows(1).size() == 2);  // both directions of the edge
    CHECK(run_independent(three.program, three.db).deleted.size() == 1);

    auto one = encode_vertex_cover(single, VcVariant::step_single_rule);
    CHECK(one.program.rules.size() == 1);
    CHECK(brute_force_step(one.program, one.db).size() == 1);

    UndirectedGraph triangle{3, {{0, 1}, {1, 2}, {0, 2}}};
    auto t3 = encode_vertex_cover(triangle, VcVariant::independent_three_rule);
    CHECK(run_independent(t3.program, t3.db).deleted.size() == 2);
    CHECK(brute_force_independent(t3.program, t3.db).size() == 2);
    auto t1 = encode_vertex_cover(triangle, VcVariant::step_single_rule);
    CHECK(brute_force_step(t1.program, t1.db).size() == 2);

    // a path's cover is its middle vertex
    UndirectedGraph path{3, {{0, 1}, {1, 2}}};
    auto p3 = encode_vertex_cover(path, VcVariant::independent_three_rule);
    auto ind = run_independent(p3.program, p3.db);
    REQUIRE(ind.deleted.size() == 1);
    CHECK(p3.db.label(ind.deleted[0]) == "VC:1");

    // duplicate and reversed edges collapse
    UndirectedGraph dup{2, {{0, 1}, {1, 0}, {0, 1}}};
    CHECK(encode_vertex_cover(dup, VcVariant::step_single_rule).db.rows(1).size() == 2);

    CHECK_THROWS_AS(encode_vertex_cover(UndirectedGraph{2, {{0, 0}}},
                                        VcVariant::step_single_rule),
                    Error);
    CHECK_THROWS_AS(encode_vertex_cover(UndirectedGraph{2, {{0, 5}}},
                                        VcVariant::step_single_rule),
                    Error);
}
