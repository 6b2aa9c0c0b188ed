#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "deltarep/instance.hpp"
#include "deltarep/parser.hpp"
#include "deltarep/rule.hpp"
#include "deltarep/schema.hpp"

#include "support/fixtures.hpp"

namespace testsupport {

struct RandomCase {
    deltarep::DatabaseInstance db;
    deltarep::DeltaProgram program;
    std::string program_text;  // kept for failure diagnostics
};

// Small random instances for the property suites: up to 3 int-typed
// relations of arity 1-2, at most 12 tuples, 1-4 rules.  Rules are valid by
// construction; delta atoms only mention relations with a smaller id than
// the head's, which keeps the deletion dependencies acyclic.  Deterministic
// in the seed.
inline RandomCase make_random_case(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto pick = [&](std::uint32_t n) { return static_cast<std::uint32_t>(rng() % n); };

    using namespace deltarep;
    std::uint32_t nrel = 1 + pick(3);
    std::vector<RelationSchema> rels;
    std::vector<std::uint32_t> arity;
    for (std::uint32_t r = 0; r < nrel; ++r) {
        arity.push_back(1 + pick(2));
        std::vector<Attribute> attrs;
        for (std::uint32_t a = 0; a < arity[r]; ++a)
            attrs.push_back({"c" + std::to_string(a), ValueKind::integer});
        rels.emplace_back("R" + std::to_string(r + 1), std::move(attrs));
    }
    auto schema = std::make_shared<const Schema>(std::move(rels));

    std::uint32_t budget = 3 + pick(10);  // tuples overall, duplicates collapse
    std::vector<std::vector<std::vector<Value>>> rows(nrel);
    for (std::uint32_t i = 0; i < budget; ++i) {
        std::uint32_t r = pick(nrel);
        std::vector<Value> row;
        for (std::uint32_t a = 0; a < arity[r]; ++a)
            row.push_back(Value(static_cast<std::int64_t>(pick(3))));
        rows[r].push_back(std::move(row));
    }
    DatabaseInstance db = DatabaseInstance::from_rows(schema, std::move(rows));

    std::string text;
    std::uint32_t nrules = 1 + pick(4);
    for (std::uint32_t i = 0; i < nrules; ++i) {
        std::uint32_t head = pick(nrel);
        if (pick(100) < 15) {
            // init-style rule over constants (may or may not match a row)
            std::string consts;
            for (std::uint32_t a = 0; a < arity[head]; ++a) {
                if (a) consts += ", ";
                consts += std::to_string(pick(3));
            }
            text += "-R" + std::to_string(head + 1) + "(" + consts + ") :- R" +
                    std::to_string(head + 1) + "(" + consts + ").\n";
            continue;
        }

        std::vector<std::string> bound;  // variables usable in later atoms
        auto head_atom = [&] {
            std::string s = "R" + std::to_string(head + 1) + "(";
            for (std::uint32_t a = 0; a < arity[head]; ++a) {
                std::string v = "x" + std::to_string(a);
                bound.push_back(v);
                if (a) s += ", ";
                s += v;
            }
            return s + ")";
        }();

        std::string body = head_atom;
        std::uint32_t fresh = 0;
        std::uint32_t extras = pick(3);
        for (std::uint32_t e = 0; e < extras; ++e) {
            bool delta = head > 0 && pick(2) == 0;
            std::uint32_t rel = delta ? pick(head) : pick(nrel);
            std::string s = std::string(delta ? "-" : "") + "R" + std::to_string(rel + 1) + "(";
            for (std::uint32_t a = 0; a < arity[rel]; ++a) {
                if (a) s += ", ";
                std::uint32_t mode = pick(4);
                if (mode == 0 && !bound.empty()) {
                    s += bound[pick(static_cast<std::uint32_t>(bound.size()))];
                } else if (mode == 1) {
                    s += std::to_string(pick(3));
                } else {
                    std::string v = "y" + std::to_string(fresh++);
                    bound.push_back(v);
                    s += v;
                }
            }
            body += ", " + s + ")";
        }
        if (pick(100) < 30 && !bound.empty()) {
            static const char* ops[] = {"=", "!=", "<", ">", "<=", ">="};
            body += ", " + bound[pick(static_cast<std::uint32_t>(bound.size()))] + " " +
                    ops[pick(6)] + " " + std::to_string(pick(3));
        }
        text += "-" + head_atom + " :- " + body + ".\n";
    }

    DeltaProgram program = parse_or_throw(text, db.schema());
    return {std::move(db), std::move(program), std::move(text)};
}

}  // namespace testsupport
