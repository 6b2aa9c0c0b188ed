#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "deltarep/instance.hpp"
#include "deltarep/schema.hpp"

namespace deltarep {

/// A term is a variable (lower-case identifier) or a constant.
struct Term {
    static Term variable(std::string name) { return Term{std::move(name)}; }
    static Term constant(Value v) { return Term{std::move(v)}; }

    bool is_variable() const { return std::holds_alternative<std::string>(t_); }
    bool is_constant() const { return !is_variable(); }
    const std::string& var() const { return std::get<std::string>(t_); }
    const Value& value() const { return std::get<Value>(t_); }

    bool operator==(const Term&) const = default;

  private:
    explicit Term(std::string v) : t_(std::move(v)) {}
    explicit Term(Value v) : t_(std::move(v)) {}
    std::variant<std::string, Value> t_;
};

/// R(t1, ..., tk), optionally a deletion atom (-R) referring to the delta
/// side of relation `relation`.
struct Atom {
    std::uint32_t relation = 0;
    bool is_delta = false;
    std::vector<Term> terms;

    bool operator==(const Atom&) const = default;
};

enum class CompareOp { eq, ne, lt, gt, le, ge };

const char* to_string(CompareOp op);
bool eval_compare(CompareOp op, const Value& lhs, const Value& rhs);

struct Comparison {
    Term lhs;
    CompareOp op = CompareOp::eq;
    Term rhs;

    bool operator==(const Comparison&) const = default;
};

/// One deletion rule: -R(x...) :- R(x...), body atoms, comparisons.
/// Well-formedness (checked by the validator, assumed everywhere else):
/// the body contains a non-delta atom over the head's relation with exactly
/// the head's term vector.
struct DeltaRule {
    std::uint32_t rule_id = 0;  // position in the program
    Atom head;                  // is_delta is always true
    std::vector<Atom> body;     // base and delta atoms, in source order
    std::vector<Comparison> comparisons;

    /// Index in `body` of the first non-delta atom matching the head.
    std::uint32_t head_body_atom = 0;
};

/// Validated, acyclic program over a fixed schema.
struct DeltaProgram {
    SchemaPtr schema;
    std::vector<DeltaRule> rules;
};

/// Canonical text forms; parsing pretty-printed output yields the same
/// program back.
std::string to_string(const Schema& schema, const Term& t);
std::string to_string(const Schema& schema, const Atom& a);
std::string to_string(const Schema& schema, const Comparison& c);
std::string to_string(const Schema& schema, const DeltaRule& r);
std::string to_string(const DeltaProgram& p);

/// A denial constraint not( atoms..., comparisons... ); atoms are plain
/// (non-delta) atoms.
struct DenialConstraint {
    std::vector<Atom> atoms;
    std::vector<Comparison> comparisons;
};

enum class DcTarget { independent, step };

/// Compiles a denial constraint into deletion rules sharing the constraint's
/// body: one rule headed by the first atom for the independent flavour, one
/// rule per atom for the step flavour.  Throws Error when the constraint has
/// no atoms or a comparison uses a variable bound by no atom.
std::vector<DeltaRule> translate_dc(const SchemaPtr& schema, const DenialConstraint& dc,
                                    DcTarget target);

/// All-constant seed rule  -R(c...) :- R(c...)  for one concrete tuple.
DeltaRule make_init_rule(const DatabaseInstance& db, TupleId tuple);

}  // namespace deltarep
