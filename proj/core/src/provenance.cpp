#include "deltarep/provenance.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>
#include <set>

#include "deltarep/errors.hpp"

namespace deltarep {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void require_pristine(const DatabaseInstance& db, const char* what) {
    if (db.deleted_count() != 0)
        throw Error(std::string(what) + " requires an instance without prior deletions");
}

struct Grounding {
    std::uint32_t rule_id;
    std::vector<AtomImage> images;
};

// Enumerates rule bodies with the given sides; the workhorse behind both
// provenance structures.
std::vector<Grounding> collect_groundings(const DeltaProgram& program, const DatabaseInstance& db,
                                          const EvalState& st) {
    std::vector<Grounding> out;
    for (const DeltaRule& rule : program.rules) {
        std::size_t first = out.size();
        enumerate_rule(rule, db, st, [&](const std::vector<AtomImage>& images) {
            out.push_back(Grounding{rule.rule_id, images});
            return true;
        });
        std::sort(out.begin() + first, out.end(),
                  [](const Grounding& a, const Grounding& b) { return a.images < b.images; });
    }
    return out;
}

}  // namespace

FormulaBuild build_formula_profiled(const DeltaProgram& program, const DatabaseInstance& db) {
    require_pristine(db, "build_formula");
    FormulaBuild out;
    auto start = Clock::now();

    // base atoms see the live tuples, delta atoms the hypothetical deletion
    // of any of them
    EvalState st = EvalState::of_instance(db);
    for (auto& mask : st.delta) mask.assign(mask.size(), true);
    std::vector<Grounding> groundings = collect_groundings(program, db, st);
    out.eval_seconds = seconds_since(start);

    auto store_start = Clock::now();
    out.formula.variables = db.live_ids();
    std::set<std::vector<ProvLiteral>> seen;
    for (const Grounding& g : groundings) {
        std::vector<ProvLiteral> lits;
        lits.reserve(g.images.size());
        for (const AtomImage& img : g.images) lits.push_back({img.id, img.is_delta});
        std::sort(lits.begin(), lits.end());
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        bool impossible = false;
        for (std::size_t i = 0; i + 1 < lits.size(); ++i)
            if (lits[i].id == lits[i + 1].id) impossible = true;  // live and deleted at once
        if (impossible) continue;
        seen.insert(std::move(lits));
    }
    for (auto& lits : seen) out.formula.clauses.push_back(ProvClause{lits});
    out.store_seconds = seconds_since(store_start);
    return out;
}

ProvenanceFormula build_formula(const DeltaProgram& program, const DatabaseInstance& db) {
    return build_formula_profiled(program, db).formula;
}

TupleCnf negate_to_cnf(const ProvenanceFormula& formula) {
    TupleCnf out;
    out.vars = formula.variables;
    out.cnf.var_count = static_cast<std::uint32_t>(out.vars.size());
    out.cnf.designated.assign(out.cnf.var_count, true);
    auto index_of = [&](TupleId id) {  // vars is sorted
        auto it = std::lower_bound(out.vars.begin(), out.vars.end(), id);
        return static_cast<std::uint32_t>(it - out.vars.begin());
    };
    for (const ProvClause& clause : formula.clauses) {
        std::vector<CnfLit> lits;
        lits.reserve(clause.literals.size());
        for (const ProvLiteral& l : clause.literals)
            lits.push_back(CnfLit{index_of(l.id), !l.delta});
        out.cnf.clauses.push_back(std::move(lits));
    }
    return out;
}

std::string cnf_to_string(const ProvenanceFormula& formula, const DatabaseInstance& db) {
    std::string out;
    for (const ProvClause& clause : formula.clauses) {
        out += '(';
        for (std::size_t i = 0; i < clause.literals.size(); ++i) {
            if (i) out += " | ";
            const ProvLiteral& l = clause.literals[i];
            if (!l.delta) out += '-';  // negated in the CNF view
            out += db.label(l.id);
        }
        out += ")\n";
    }
    return out;
}

void write_formula_dimacs(const ProvenanceFormula& formula, const DatabaseInstance& db,
                          std::ostream& out) {
    TupleCnf tc = negate_to_cnf(formula);
    for (std::uint32_t v = 0; v < tc.vars.size(); ++v)
        out << "c var " << (v + 1) << ' ' << db.label(tc.vars[v]) << '\n';
    write_dimacs(tc.cnf, out);
}

GraphBuild build_graph_profiled(const DeltaProgram& program, const DatabaseInstance& db) {
    require_pristine(db, "build_graph");
    GraphBuild out;
    auto start = Clock::now();

    FixpointTrace trace = trace_end_fixpoint(program, db);
    EvalState st = EvalState::of_instance(db);
    for (TupleId id : trace.deleted) st.delta[id.relation][id.ordinal] = true;
    std::vector<Grounding> groundings = collect_groundings(program, db, st);
    out.eval_seconds = seconds_since(start);

    auto process_start = Clock::now();
    ProvenanceGraph& g = out.graph;
    g.rounds = trace.rounds;
    g.delta_nodes = trace.deleted;
    g.layer = trace.layer;

    std::set<TupleId> base_nodes;
    for (const Grounding& gr : groundings) {
        const DeltaRule& rule = program.rules[gr.rule_id];
        GraphAssignment a;
        a.rule_id = gr.rule_id;
        a.images = gr.images;
        a.head = gr.images[rule.head_body_atom].id;
        std::set<TupleId> bases, deltas;
        for (const AtomImage& img : a.images)
            (img.is_delta ? deltas : bases).insert(img.id);
        for (TupleId id : bases) {
            base_nodes.insert(id);
            g.benefit[id] += 1;
        }
        for (TupleId id : deltas) g.benefit[id] -= 1;
        g.assignments.push_back(std::move(a));
    }
    // delta images are also base nodes of the graph (their tuple appears in
    // the deriving assignment's head atom), so benefit keys stay base-only
    g.base_nodes.assign(base_nodes.begin(), base_nodes.end());
    out.process_seconds = seconds_since(process_start);
    return out;
}

ProvenanceGraph build_graph(const DeltaProgram& program, const DatabaseInstance& db) {
    return build_graph_profiled(program, db).graph;
}

void write_graph_dot(const ProvenanceGraph& graph, const DatabaseInstance& db, std::ostream& out) {
    out << "digraph provenance {\n  rankdir=LR;\n";
    for (TupleId id : graph.base_nodes) {
        auto it = graph.benefit.find(id);
        out << "  \"" << db.label(id) << "\" [label=\"" << db.label(id) << "\\nbenefit "
            << (it == graph.benefit.end() ? 0 : it->second) << "\"];\n";
    }
    for (TupleId id : graph.delta_nodes) {
        out << "  \"-" << db.label(id) << "\" [label=\"-" << db.label(id) << "\\nlayer "
            << graph.layer.at(id) << "\", shape=box, style=dashed];\n";
    }
    for (std::size_t i = 0; i < graph.assignments.size(); ++i) {
        const GraphAssignment& a = graph.assignments[i];
        std::string node = "a" + std::to_string(i);
        out << "  \"" << node << "\" [shape=point, xlabel=\"r" << a.rule_id << "\"];\n";
        std::set<std::pair<bool, TupleId>> inputs;
        for (const AtomImage& img : a.images) inputs.insert({img.is_delta, img.id});
        for (const auto& [is_delta, id] : inputs)
            out << "  \"" << (is_delta ? "-" : "") << db.label(id) << "\" -> \"" << node << "\";\n";
        out << "  \"" << node << "\" -> \"-" << db.label(a.head) << "\";\n";
    }
    out << "}\n";
}

}  // namespace deltarep
