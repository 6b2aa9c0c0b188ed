#include "deltarep/oracles.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <set>

#include "deltarep/errors.hpp"
#include "deltarep/eval.hpp"
#include "deltarep/parser.hpp"

namespace deltarep {

std::vector<TupleId> brute_force_independent(const DeltaProgram& program,
                                             const DatabaseInstance& db, std::uint32_t guard) {
    std::vector<TupleId> universe = db.live_ids();
    if (universe.size() > guard)
        throw SizeGuardError("brute_force_independent: " + std::to_string(universe.size()) +
                             " live tuples > guard " + std::to_string(guard));
    const std::uint32_t n = static_cast<std::uint32_t>(universe.size());

    for (std::uint32_t k = 0; k <= n; ++k) {
        // combinations of size k in lexicographic order over sorted ids
        std::vector<std::uint32_t> idx(k);
        for (std::uint32_t i = 0; i < k; ++i) idx[i] = i;
        while (true) {
            std::vector<TupleId> candidate;
            candidate.reserve(k);
            for (std::uint32_t i : idx) candidate.push_back(universe[i]);
            if (verify_stabilizing(program, db, candidate)) return candidate;
            // advance
            std::int32_t pos = static_cast<std::int32_t>(k) - 1;
            while (pos >= 0 && idx[pos] == n - k + pos) --pos;
            if (pos < 0) break;
            ++idx[pos];
            for (std::uint32_t j = pos + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    throw Error("internal: deleting every live tuple must stabilize");
}

namespace {

struct StepSearch {
    const DeltaProgram& program;
    std::uint64_t state_guard;
    std::uint64_t states = 0;
    std::set<std::vector<TupleId>> visited;
    std::optional<std::vector<TupleId>> best;

    void consider_terminal(const std::vector<TupleId>& deleted) {
        if (!best || deleted.size() < best->size() ||
            (deleted.size() == best->size() && deleted < *best))
            best = deleted;
    }

    void explore(const DatabaseInstance& state, std::vector<TupleId>& deleted) {
        if (!visited.insert(deleted).second) return;
        if (++states > state_guard)
            throw SizeGuardError("brute_force_step exceeded its state guard");

        // every enabled firing deletes a live head, so distinct heads are
        // exactly the distinct successor states
        std::set<TupleId> heads;
        EvalState st = EvalState::of_instance(state);
        for (const DeltaRule& rule : program.rules)
            enumerate_rule(rule, state, st, [&](const std::vector<AtomImage>& images) {
                heads.insert(images[rule.head_body_atom].id);
                return true;
            });

        if (heads.empty()) {
            consider_terminal(deleted);
            return;
        }
        if (best && deleted.size() + 1 > best->size()) return;  // cannot beat the incumbent
        for (TupleId h : heads) {
            DatabaseInstance next = apply_deletion(state, std::vector<TupleId>{h});
            auto at = std::lower_bound(deleted.begin(), deleted.end(), h);
            deleted.insert(at, h);
            explore(next, deleted);
            deleted.erase(std::lower_bound(deleted.begin(), deleted.end(), h));
        }
    }
};

}  // namespace

std::vector<TupleId> brute_force_step(const DeltaProgram& program, const DatabaseInstance& db,
                                      std::uint64_t state_guard) {
    StepSearch search{program, state_guard, 0, {}, {}};
    std::vector<TupleId> deleted;
    search.explore(db, deleted);
    if (!search.best) throw Error("internal: step search found no terminal state");
    return *search.best;
}

namespace {

GeneratedInstance assemble(std::vector<RelationSchema> relations,
                           std::vector<std::vector<std::vector<Value>>> rows,
                           const std::string& program_text) {
    auto schema = std::make_shared<const Schema>(std::move(relations));
    DatabaseInstance db = DatabaseInstance::from_rows(schema, std::move(rows));
    ParseResult parsed = parse_program(program_text, schema);
    if (!parsed.ok())
        throw Error("internal: generated program failed to validate:\n" +
                    format_errors(parsed.errors));
    return GeneratedInstance{std::move(db), std::move(*parsed.program)};
}

GeneratedInstance generate_cascade(std::uint32_t depth, std::uint64_t scale, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::uint64_t per_level = std::max<std::uint64_t>(1, scale / depth);

    std::vector<RelationSchema> relations;
    std::vector<std::vector<std::vector<Value>>> rows(depth);
    relations.push_back(RelationSchema("C1", {{"id", ValueKind::integer}}));
    for (std::uint32_t k = 2; k <= depth; ++k)
        relations.push_back(RelationSchema("C" + std::to_string(k),
                                           {{"id", ValueKind::integer},
                                            {"parent", ValueKind::integer}}));

    // level 1: the rule below seeds the deletion of id 0; deeper levels link
    // roughly half their tuples into the affected subtree
    std::vector<std::int64_t> affected{0}, unaffected;
    for (std::uint64_t i = 0; i < per_level; ++i) {
        rows[0].push_back({Value(static_cast<std::int64_t>(i))});
        if (i != 0) unaffected.push_back(static_cast<std::int64_t>(i));
    }
    for (std::uint32_t k = 1; k < depth; ++k) {
        std::vector<std::int64_t> next_affected, next_unaffected;
        for (std::uint64_t i = 0; i < per_level; ++i) {
            const bool hit = i < per_level / 2 || unaffected.empty();
            const auto& pool = hit ? affected : unaffected;
            std::int64_t parent = pool[rng() % pool.size()];
            rows[k].push_back({Value(static_cast<std::int64_t>(i)), Value(parent)});
            (hit ? next_affected : next_unaffected).push_back(static_cast<std::int64_t>(i));
        }
        affected = std::move(next_affected);
        unaffected = std::move(next_unaffected);
    }

    std::string text = "-C1(x) :- C1(x), x = 0.\n";
    for (std::uint32_t k = 2; k <= depth; ++k) {
        std::string head = "C" + std::to_string(k);
        std::string prev = "C" + std::to_string(k - 1);
        text += "-" + head + "(x, p) :- " + head + "(x, p), -" + prev +
                (k == 2 ? "(p)" : "(p, q)") + ".\n";
    }
    return assemble(std::move(relations), std::move(rows), text);
}

GeneratedInstance generate_join_chain(std::uint32_t width, std::uint64_t scale) {
    const std::uint64_t top = std::max<std::uint64_t>(2, scale / 2);

    std::vector<RelationSchema> relations;
    std::vector<std::vector<std::vector<Value>>> rows(width);
    std::vector<std::uint64_t> sizes(width);
    for (std::uint32_t k = 0; k < width; ++k) {
        sizes[k] = std::max<std::uint64_t>(1, top >> k);
        relations.push_back(RelationSchema("J" + std::to_string(k + 1),
                                           {{"a", ValueKind::integer},
                                            {"b", ValueKind::integer}}));
    }
    for (std::uint32_t k = 0; k < width; ++k) {
        std::uint64_t fanin = k + 1 < width ? sizes[k + 1] : 1;
        for (std::uint64_t i = 0; i < sizes[k]; ++i)
            rows[k].push_back({Value(static_cast<std::int64_t>(i)),
                               Value(static_cast<std::int64_t>(i % fanin))});
    }

    std::string text = "-J1(k1, k2) :- J1(k1, k2)";
    for (std::uint32_t k = 2; k <= width; ++k)
        text += ", J" + std::to_string(k) + "(k" + std::to_string(k) + ", k" +
                std::to_string(k + 1) + ")";
    text += ".\n";
    return assemble(std::move(relations), std::move(rows), text);
}

std::optional<std::uint32_t> parse_suffix(const std::string& name, const std::string& prefix) {
    if (!name.starts_with(prefix)) return std::nullopt;
    std::string rest = name.substr(prefix.size());
    if (rest.empty() || rest.size() > 4 ||
        rest.find_first_not_of("0123456789") != std::string::npos)
        return std::nullopt;
    return static_cast<std::uint32_t>(std::stoul(rest));
}

}  // namespace

GeneratedInstance generate_instance(const std::string& template_name, std::uint64_t scale,
                                    std::uint64_t seed) {
    if (scale == 0) throw Error("generate_instance: scale must be positive");
    if (template_name == "cascade") return generate_cascade(5, scale, seed);
    if (auto depth = parse_suffix(template_name, "cascade-depth-")) {
        if (*depth < 2 || *depth > 16) throw Error("cascade depth must be in 2..16");
        return generate_cascade(*depth, scale, seed);
    }
    if (template_name == "join-chain") return generate_join_chain(3, scale);
    if (auto width = parse_suffix(template_name, "join-chain-")) {
        if (*width < 1 || *width > 8) throw Error("join-chain width must be in 1..8");
        return generate_join_chain(*width, scale);
    }
    throw Error("unknown template " + template_name);
}

GeneratedInstance encode_vertex_cover(const UndirectedGraph& graph, VcVariant variant) {
    std::vector<RelationSchema> relations;
    relations.push_back(RelationSchema("VC", {{"v", ValueKind::integer}}));
    relations.push_back(RelationSchema("E", {{"a", ValueKind::integer},
                                             {"b", ValueKind::integer}}));

    std::vector<std::vector<std::vector<Value>>> rows(2);
    for (std::uint32_t v = 0; v < graph.vertex_count; ++v)
        rows[0].push_back({Value(static_cast<std::int64_t>(v))});

    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (auto [u, v] : graph.edges) {
        if (u >= graph.vertex_count || v >= graph.vertex_count)
            throw Error("encode_vertex_cover: edge endpoint out of range");
        if (u == v) throw Error("encode_vertex_cover: self loop");
        edges.push_back({std::min(u, v), std::max(u, v)});
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (auto [u, v] : edges) {
        rows[1].push_back({Value(static_cast<std::int64_t>(u)), Value(static_cast<std::int64_t>(v))});
        rows[1].push_back({Value(static_cast<std::int64_t>(v)), Value(static_cast<std::int64_t>(u))});
    }

    std::string text = "-VC(x) :- VC(x), E(x, y), VC(y).\n";
    if (variant == VcVariant::independent_three_rule)
        text +=
            "-VC(x) :- VC(x), -E(x, y).\n"
            "-VC(y) :- VC(y), -E(x, y).\n";
    return assemble(std::move(relations), std::move(rows), text);
}

}  // namespace deltarep
