#include "deltarep/eval.hpp"

#include <algorithm>
#include <chrono>
#include <unordered_map>

#include "deltarep/errors.hpp"

namespace deltarep {

const char* to_string(SemanticsKind s) {
    switch (s) {
        case SemanticsKind::end_state: return "end";
        case SemanticsKind::stage: return "stage";
        case SemanticsKind::step: return "step";
        case SemanticsKind::independent: return "independent";
    }
    return "?";
}

EvalState EvalState::of_instance(const DatabaseInstance& db) {
    EvalState st;
    st.base.resize(db.relation_count());
    st.delta.resize(db.relation_count());
    for (std::uint32_t r = 0; r < db.relation_count(); ++r) {
        auto rows = db.rows(r);
        st.base[r].assign(rows.size(), false);
        st.delta[r].assign(rows.size(), false);
        for (const Tuple& t : rows) {
            if (db.is_live(t.id)) st.base[r][t.id.ordinal] = true;
            if (db.is_deleted(t.id)) st.delta[r][t.id.ordinal] = true;
        }
    }
    return st;
}

EvalState EvalState::everything(const DatabaseInstance& db) {
    EvalState st;
    st.base.resize(db.relation_count());
    st.delta.resize(db.relation_count());
    for (std::uint32_t r = 0; r < db.relation_count(); ++r) {
        st.base[r].assign(db.rows(r).size(), true);
        st.delta[r].assign(db.rows(r).size(), true);
    }
    return st;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// What to do with each position of an atom while joining.
struct PosOp {
    enum Kind { constant, bind, check } kind;
    Value value;        // constant
    std::uint32_t slot; // bind / check
    bool in_key;        // satisfied by the index lookup, no in-loop check needed
};

struct PlannedAtom {
    std::uint32_t source_idx;  // position in rule.body
    std::uint32_t relation;
    bool is_delta;
    std::vector<PosOp> ops;
    std::vector<std::uint32_t> key_positions;  // bound before this atom
    std::vector<std::uint32_t> comparisons;    // evaluable right after this atom
};

struct CmpOp {
    CompareOp op;
    bool lhs_is_slot, rhs_is_slot;
    std::uint32_t lhs_slot = 0, rhs_slot = 0;
    Value lhs_const, rhs_const;
};

// Join plan for one rule: atoms reordered so that all-constant atoms come
// first, otherwise source order; comparisons scheduled as early as possible.
struct Plan {
    std::vector<PlannedAtom> atoms;
    std::vector<CmpOp> cmps;
    std::uint32_t slot_count = 0;

    explicit Plan(const DeltaRule& rule) {
        std::vector<std::uint32_t> order;
        for (std::uint32_t i = 0; i < rule.body.size(); ++i) {
            bool all_const = std::all_of(rule.body[i].terms.begin(), rule.body[i].terms.end(),
                                         [](const Term& t) { return t.is_constant(); });
            if (all_const) order.push_back(i);
        }
        for (std::uint32_t i = 0; i < rule.body.size(); ++i)
            if (std::find(order.begin(), order.end(), i) == order.end()) order.push_back(i);

        std::unordered_map<std::string, std::uint32_t> slots;
        auto slot_of = [&](const std::string& v) -> std::optional<std::uint32_t> {
            auto it = slots.find(v);
            if (it == slots.end()) return std::nullopt;
            return it->second;
        };

        for (const Comparison& c : rule.comparisons) {
            CmpOp op;
            op.op = c.op;
            op.lhs_is_slot = c.lhs.is_variable();
            op.rhs_is_slot = c.rhs.is_variable();
            if (!op.lhs_is_slot) op.lhs_const = c.lhs.value();
            if (!op.rhs_is_slot) op.rhs_const = c.rhs.value();
            cmps.push_back(op);
        }

        std::vector<bool> cmp_scheduled(rule.comparisons.size(), false);
        for (std::uint32_t src : order) {
            const Atom& a = rule.body[src];
            PlannedAtom pa;
            pa.source_idx = src;
            pa.relation = a.relation;
            pa.is_delta = a.is_delta;
            for (std::uint32_t p = 0; p < a.terms.size(); ++p) {
                const Term& t = a.terms[p];
                PosOp op;
                if (t.is_constant()) {
                    op.kind = PosOp::constant;
                    op.value = t.value();
                    op.in_key = true;
                    pa.key_positions.push_back(p);
                } else if (auto s = slot_of(t.var())) {
                    op.kind = PosOp::check;
                    op.slot = *s;
                    op.in_key = true;
                    pa.key_positions.push_back(p);
                } else {
                    op.kind = PosOp::bind;
                    op.slot = slot_count;
                    op.in_key = false;
                    slots.emplace(t.var(), slot_count++);
                }
                pa.ops.push_back(std::move(op));
            }
            // a variable repeated inside this same atom: the later position
            // became "check" against a slot bound at an earlier position of
            // the atom itself, which the index cannot cover
            for (std::uint32_t p = 0; p < pa.ops.size(); ++p) {
                if (pa.ops[p].kind != PosOp::check) continue;
                bool bound_here = false;
                for (std::uint32_t q = 0; q < p; ++q)
                    if (pa.ops[q].kind == PosOp::bind && pa.ops[q].slot == pa.ops[p].slot)
                        bound_here = true;
                if (bound_here) {
                    pa.ops[p].in_key = false;
                    std::erase(pa.key_positions, p);
                }
            }
            for (std::uint32_t ci = 0; ci < cmps.size(); ++ci) {
                if (cmp_scheduled[ci]) continue;
                const Comparison& c = rule.comparisons[ci];
                bool ready = true;
                for (const Term* t : {&c.lhs, &c.rhs}) {
                    if (!t->is_variable()) continue;
                    auto s = slot_of(t->var());
                    if (!s) { ready = false; break; }
                    (t == &c.lhs ? cmps[ci].lhs_slot : cmps[ci].rhs_slot) = *s;
                }
                if (ready) {
                    cmp_scheduled[ci] = true;
                    pa.comparisons.push_back(ci);
                }
            }
            atoms.push_back(std::move(pa));
        }
    }
};

using Index = std::unordered_map<std::vector<Value>, std::vector<std::uint32_t>, ValueVectorHash>;

struct Joiner {
    const DatabaseInstance& db;
    const EvalState& st;
    const Plan& plan;
    std::vector<Value> slots;
    std::vector<AtomImage> images;
    std::vector<Index> indexes;  // one per planned atom with a nonempty key
    const std::function<bool(const std::vector<AtomImage>&)>& sink;

    Joiner(const DeltaRule& rule, const DatabaseInstance& db_, const EvalState& st_,
           const Plan& plan_, const std::function<bool(const std::vector<AtomImage>&)>& sink_)
        : db(db_), st(st_), plan(plan_), sink(sink_) {
        slots.resize(plan.slot_count);
        images.resize(rule.body.size());
        indexes.resize(plan.atoms.size());
        for (std::size_t i = 0; i < plan.atoms.size(); ++i) {
            const PlannedAtom& pa = plan.atoms[i];
            if (pa.key_positions.empty()) continue;
            const auto& mask = pa.is_delta ? st.delta[pa.relation] : st.base[pa.relation];
            auto rows = db.rows(pa.relation);
            std::vector<Value> key(pa.key_positions.size());
            for (std::uint32_t ord = 0; ord < rows.size(); ++ord) {
                if (!mask[ord]) continue;
                for (std::size_t k = 0; k < pa.key_positions.size(); ++k)
                    key[k] = rows[ord].values[pa.key_positions[k]];
                indexes[i][key].push_back(ord);
            }
        }
    }

    bool run() { return descend(0); }

    bool descend(std::size_t depth) {
        if (depth == plan.atoms.size()) return sink(images);
        const PlannedAtom& pa = plan.atoms[depth];
        auto rows = db.rows(pa.relation);
        const auto& mask = pa.is_delta ? st.delta[pa.relation] : st.base[pa.relation];

        const std::vector<std::uint32_t>* candidates = nullptr;
        std::vector<std::uint32_t> scan;
        std::vector<Value> key;
        if (!pa.key_positions.empty()) {
            key.reserve(pa.key_positions.size());
            for (std::uint32_t p : pa.key_positions) {
                const PosOp& op = pa.ops[p];
                key.push_back(op.kind == PosOp::constant ? op.value : slots[op.slot]);
            }
            auto it = indexes[depth].find(key);
            if (it == indexes[depth].end()) return true;
            candidates = &it->second;
        } else {
            for (std::uint32_t ord = 0; ord < rows.size(); ++ord)
                if (mask[ord]) scan.push_back(ord);
            candidates = &scan;
        }

        for (std::uint32_t ord : *candidates) {
            const Tuple& t = rows[ord];
            bool match = true;
            for (std::uint32_t p = 0; p < pa.ops.size() && match; ++p) {
                const PosOp& op = pa.ops[p];
                if (op.in_key) continue;
                switch (op.kind) {
                    case PosOp::constant: match = t.values[p] == op.value; break;
                    case PosOp::check: match = t.values[p] == slots[op.slot]; break;
                    case PosOp::bind: slots[op.slot] = t.values[p]; break;
                }
            }
            if (!match) continue;
            for (std::uint32_t ci : pa.comparisons) {
                const CmpOp& c = plan.cmps[ci];
                const Value& l = c.lhs_is_slot ? slots[c.lhs_slot] : c.lhs_const;
                const Value& r = c.rhs_is_slot ? slots[c.rhs_slot] : c.rhs_const;
                if (!eval_compare(c.op, l, r)) { match = false; break; }
            }
            if (!match) continue;
            images[pa.source_idx] = AtomImage{t.id, pa.is_delta};
            if (!descend(depth + 1)) return false;
        }
        return true;
    }
};

}  // namespace

bool enumerate_rule(const DeltaRule& rule, const DatabaseInstance& db, const EvalState& st,
                    const std::function<bool(const std::vector<AtomImage>&)>& sink) {
    Plan plan(rule);
    Joiner j(rule, db, st, plan, sink);
    return j.run();
}

std::map<std::string, Value> bindings_of(const DeltaRule& rule, const DatabaseInstance& db,
                                         const std::vector<AtomImage>& images) {
    std::map<std::string, Value> out;
    for (std::size_t i = 0; i < rule.body.size(); ++i) {
        const Atom& a = rule.body[i];
        const Tuple& t = db.tuple(images[i].id);
        for (std::size_t p = 0; p < a.terms.size(); ++p)
            if (a.terms[p].is_variable()) out.emplace(a.terms[p].var(), t.values[p]);
    }
    return out;
}

namespace {

RuleAssignment materialize(const DeltaRule& rule, const DatabaseInstance& db,
                           const std::vector<AtomImage>& images) {
    RuleAssignment a;
    a.rule_id = rule.rule_id;
    a.atom_images = images;
    a.head = images[rule.head_body_atom].id;
    a.bindings = bindings_of(rule, db, images);
    return a;
}

}  // namespace

std::vector<RuleAssignment> find_assignments(const DeltaRule& rule, const DatabaseInstance& db) {
    EvalState st = EvalState::of_instance(db);
    std::vector<RuleAssignment> out;
    enumerate_rule(rule, db, st, [&](const std::vector<AtomImage>& images) {
        out.push_back(materialize(rule, db, images));
        return true;
    });
    std::sort(out.begin(), out.end(), [](const RuleAssignment& a, const RuleAssignment& b) {
        return a.atom_images < b.atom_images;
    });
    return out;
}

std::vector<RuleAssignment> find_assignments(const DeltaProgram& program,
                                             const DatabaseInstance& db) {
    EvalState st = EvalState::of_instance(db);
    std::vector<RuleAssignment> out;
    for (const DeltaRule& rule : program.rules) {
        std::vector<RuleAssignment> per;
        enumerate_rule(rule, db, st, [&](const std::vector<AtomImage>& images) {
            per.push_back(materialize(rule, db, images));
            return true;
        });
        std::sort(per.begin(), per.end(), [](const RuleAssignment& a, const RuleAssignment& b) {
            return a.atom_images < b.atom_images;
        });
        out.insert(out.end(), std::make_move_iterator(per.begin()),
                   std::make_move_iterator(per.end()));
    }
    return out;
}

std::optional<RuleAssignment> stability_witness(const DeltaProgram& program,
                                                const DatabaseInstance& db) {
    EvalState st = EvalState::of_instance(db);
    std::optional<RuleAssignment> witness;
    for (const DeltaRule& rule : program.rules) {
        enumerate_rule(rule, db, st, [&](const std::vector<AtomImage>& images) {
            witness = materialize(rule, db, images);
            return false;
        });
        if (witness) break;
    }
    return witness;
}

bool is_stable(const DeltaProgram& program, const DatabaseInstance& db) {
    return !stability_witness(program, db).has_value();
}

bool verify_stabilizing(const DeltaProgram& program, const DatabaseInstance& db,
                        const std::vector<TupleId>& s) {
    return is_stable(program, apply_deletion(db, s));
}

namespace {

// Shared fixpoint driver.  When `freeze_base` the live mask never shrinks
// (derive-everything-then-delete-once); otherwise each round's derivations
// leave the live side before the next round.
FixpointTrace run_fixpoint(const DeltaProgram& program, const DatabaseInstance& db,
                           bool freeze_base) {
    EvalState st = EvalState::of_instance(db);
    FixpointTrace trace;

    // dedup marks for the round being built; kept outside st so that rules
    // evaluated later in the same round still see the previous round's state
    std::vector<std::vector<bool>> fresh_mark(st.delta.size());
    for (std::size_t r = 0; r < st.delta.size(); ++r)
        fresh_mark[r].assign(st.delta[r].size(), false);

    while (true) {
        std::vector<TupleId> fresh;
        for (const DeltaRule& rule : program.rules) {
            enumerate_rule(rule, db, st, [&](const std::vector<AtomImage>& images) {
                TupleId head = images[rule.head_body_atom].id;
                if (!st.delta[head.relation][head.ordinal] &&
                    !fresh_mark[head.relation][head.ordinal]) {
                    fresh_mark[head.relation][head.ordinal] = true;
                    fresh.push_back(head);
                }
                return true;
            });
        }
        if (fresh.empty()) break;
        ++trace.rounds;
        std::sort(fresh.begin(), fresh.end());
        for (TupleId id : fresh) {
            fresh_mark[id.relation][id.ordinal] = false;
            st.delta[id.relation][id.ordinal] = true;
            if (!freeze_base) st.base[id.relation][id.ordinal] = false;
            trace.layer.emplace(id, trace.rounds);
            trace.deleted.push_back(id);
        }
    }
    std::sort(trace.deleted.begin(), trace.deleted.end());
    return trace;
}

}  // namespace

FixpointTrace trace_end_fixpoint(const DeltaProgram& program, const DatabaseInstance& db) {
    return run_fixpoint(program, db, true);
}

namespace {

RepairResult finish_fixpoint(const DeltaProgram& program, const DatabaseInstance& db,
                             FixpointTrace trace, SemanticsKind kind, Clock::time_point start) {
    RepairResult res;
    res.semantics = kind;
    res.deleted = std::move(trace.deleted);
    res.rounds_or_steps = trace.rounds;
    res.optimal = true;  // fixpoint outcome is unique for these semantics
    res.stable = verify_stabilizing(program, db, res.deleted);
    res.phases.push_back({"eval", seconds_since(start)});
    res.wall_seconds = seconds_since(start);
    return res;
}

}  // namespace

RepairResult run_end(const DeltaProgram& program, const DatabaseInstance& db) {
    auto start = Clock::now();
    return finish_fixpoint(program, db, run_fixpoint(program, db, true), SemanticsKind::end_state,
                           start);
}

RepairResult run_stage(const DeltaProgram& program, const DatabaseInstance& db) {
    auto start = Clock::now();
    return finish_fixpoint(program, db, run_fixpoint(program, db, false), SemanticsKind::stage,
                           start);
}

RepairResult replay_step_sequence(const DeltaProgram& program, const DatabaseInstance& db,
                                  const std::vector<Firing>& sequence) {
    auto start = Clock::now();
    DatabaseInstance current = db;
    std::vector<TupleId> deleted;

    for (std::size_t step = 0; step < sequence.size(); ++step) {
        const Firing& f = sequence[step];
        if (f.rule_id >= program.rules.size())
            throw InvalidFiringError(step, "no rule with id " + std::to_string(f.rule_id));
        const DeltaRule& rule = program.rules[f.rule_id];

        auto value_of = [&](const Term& t) -> const Value& {
            if (t.is_constant()) return t.value();
            auto it = f.bindings.find(t.var());
            if (it == f.bindings.end())
                throw InvalidFiringError(step, "no binding for variable " + t.var());
            return it->second;
        };

        std::optional<TupleId> head;
        for (std::uint32_t i = 0; i < rule.body.size(); ++i) {
            const Atom& a = rule.body[i];
            std::vector<Value> values;
            values.reserve(a.terms.size());
            for (const Term& t : a.terms) values.push_back(value_of(t));
            auto id = current.find(a.relation, values);
            const std::string name = program.schema->relation(a.relation).name();
            if (!id)
                throw InvalidFiringError(step, "no tuple " + name + "(...) for this binding");
            if (a.is_delta && !current.is_deleted(*id))
                throw InvalidFiringError(step, "tuple " + current.label(*id) + " is not deleted");
            if (!a.is_delta && !current.is_live(*id))
                throw InvalidFiringError(step, "tuple " + current.label(*id) + " is not live");
            if (i == rule.head_body_atom) head = *id;
        }
        for (const Comparison& c : rule.comparisons)
            if (!eval_compare(c.op, value_of(c.lhs), value_of(c.rhs)))
                throw InvalidFiringError(step, "comparison " +
                                                   to_string(*program.schema, c) + " fails");

        current = apply_deletion(current, std::vector<TupleId>{*head});
        deleted.push_back(*head);
    }

    RepairResult res;
    res.semantics = SemanticsKind::step;
    std::sort(deleted.begin(), deleted.end());
    res.deleted = std::move(deleted);
    res.rounds_or_steps = sequence.size();
    res.stable = is_stable(program, current);
    res.optimal = false;
    res.phases.push_back({"eval", seconds_since(start)});
    res.wall_seconds = seconds_since(start);
    return res;
}

}  // namespace deltarep
