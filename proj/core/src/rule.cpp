#include "deltarep/rule.hpp"

#include <unordered_set>

#include "deltarep/errors.hpp"

namespace deltarep {

const char* to_string(CompareOp op) {
    switch (op) {
        case CompareOp::eq: return "=";
        case CompareOp::ne: return "!=";
        case CompareOp::lt: return "<";
        case CompareOp::gt: return ">";
        case CompareOp::le: return "<=";
        case CompareOp::ge: return ">=";
    }
    return "?";
}

bool eval_compare(CompareOp op, const Value& lhs, const Value& rhs) {
    auto c = lhs <=> rhs;
    switch (op) {
        case CompareOp::eq: return c == 0;
        case CompareOp::ne: return c != 0;
        case CompareOp::lt: return c < 0;
        case CompareOp::gt: return c > 0;
        case CompareOp::le: return c <= 0;
        case CompareOp::ge: return c >= 0;
    }
    return false;
}

std::string to_string(const Schema&, const Term& t) {
    return t.is_variable() ? t.var() : t.value().to_string();
}

std::string to_string(const Schema& schema, const Atom& a) {
    std::string out;
    if (a.is_delta) out += '-';
    out += schema.relation(a.relation).name();
    out += '(';
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
        if (i) out += ", ";
        out += to_string(schema, a.terms[i]);
    }
    out += ')';
    return out;
}

std::string to_string(const Schema& schema, const Comparison& c) {
    return to_string(schema, c.lhs) + " " + to_string(c.op) + " " + to_string(schema, c.rhs);
}

std::string to_string(const Schema& schema, const DeltaRule& r) {
    std::string out = to_string(schema, r.head) + " :- ";
    bool first = true;
    for (const Atom& a : r.body) {
        if (!first) out += ", ";
        first = false;
        out += to_string(schema, a);
    }
    for (const Comparison& c : r.comparisons) {
        if (!first) out += ", ";
        first = false;
        out += to_string(schema, c);
    }
    out += '.';
    return out;
}

std::string to_string(const DeltaProgram& p) {
    std::string out;
    for (const DeltaRule& r : p.rules) {
        out += to_string(*p.schema, r);
        out += '\n';
    }
    return out;
}

namespace {

void collect_atom_vars(const Atom& a, std::unordered_set<std::string>& vars) {
    for (const Term& t : a.terms)
        if (t.is_variable()) vars.insert(t.var());
}

}  // namespace

std::vector<DeltaRule> translate_dc(const SchemaPtr& schema, const DenialConstraint& dc,
                                    DcTarget target) {
    if (dc.atoms.empty()) throw Error("denial constraint needs at least one atom");

    std::unordered_set<std::string> bound;
    for (const Atom& a : dc.atoms) {
        if (a.is_delta) throw Error("denial constraint atoms must be plain atoms");
        if (a.relation >= schema->relation_count()) throw Error("denial constraint: unknown relation");
        if (a.terms.size() != schema->relation(a.relation).arity())
            throw Error("denial constraint: arity mismatch on " + schema->relation(a.relation).name());
        collect_atom_vars(a, bound);
    }
    for (const Comparison& c : dc.comparisons) {
        for (const Term* t : {&c.lhs, &c.rhs})
            if (t->is_variable() && !bound.contains(t->var()))
                throw Error("denial constraint: comparison variable " + t->var() +
                            " is bound by no atom");
        if (c.lhs.is_constant() && c.rhs.is_constant())
            throw Error("denial constraint: comparison with two constants");
    }

    std::size_t head_count = target == DcTarget::independent ? 1 : dc.atoms.size();
    std::vector<DeltaRule> rules;
    for (std::size_t i = 0; i < head_count; ++i) {
        DeltaRule r;
        r.rule_id = static_cast<std::uint32_t>(i);
        r.head = dc.atoms[i];
        r.head.is_delta = true;
        r.body = dc.atoms;
        r.comparisons = dc.comparisons;
        r.head_body_atom = static_cast<std::uint32_t>(i);
        rules.push_back(std::move(r));
    }
    return rules;
}

DeltaRule make_init_rule(const DatabaseInstance& db, TupleId tuple) {
    const Tuple& t = db.tuple(tuple);  // throws UnknownTupleError
    DeltaRule r;
    Atom base;
    base.relation = tuple.relation;
    base.is_delta = false;
    for (const Value& v : t.values) base.terms.push_back(Term::constant(v));
    r.head = base;
    r.head.is_delta = true;
    r.body = {base};
    r.head_body_atom = 0;
    return r;
}

}  // namespace deltarep
