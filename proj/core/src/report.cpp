#include "deltarep/report.hpp"

namespace deltarep {
namespace {

nlohmann::ordered_json value_json(const Value& v) {
    if (v.kind() == ValueKind::integer) return v.as_int();
    return v.as_text();
}

nlohmann::ordered_json tuple_json(const DatabaseInstance& db, TupleId id) {
    nlohmann::ordered_json j;
    j["id"] = db.label(id);
    auto& values = j["values"] = nlohmann::ordered_json::array();
    for (const Value& v : db.tuple(id).values) values.push_back(value_json(v));
    return j;
}

}  // namespace

nlohmann::ordered_json report_json(const RepairResult& result, const DatabaseInstance& db,
                                   bool include_timing) {
    nlohmann::ordered_json j;
    j["semantics"] = to_string(result.semantics);
    auto& deleted = j["deleted"] = nlohmann::ordered_json::array();
    for (TupleId id : result.deleted) deleted.push_back(tuple_json(db, id));
    j["deleted_count"] = result.deleted.size();
    j["stable"] = result.stable;
    j["optimal"] = result.optimal;
    j["rounds_or_steps"] = result.rounds_or_steps;
    if (result.provenance.clauses || result.provenance.variables || result.provenance.graph_nodes ||
        result.provenance.graph_assignments) {
        nlohmann::ordered_json p;
        p["clauses"] = result.provenance.clauses;
        p["variables"] = result.provenance.variables;
        p["graph_nodes"] = result.provenance.graph_nodes;
        p["graph_assignments"] = result.provenance.graph_assignments;
        j["provenance"] = std::move(p);
    }
    if (include_timing) {
        j["wall_seconds"] = result.wall_seconds;
        auto& phases = j["phases"] = nlohmann::ordered_json::array();
        for (const PhaseTiming& ph : result.phases)
            phases.push_back({{"name", ph.name}, {"seconds", ph.seconds}});
    }
    return j;
}

nlohmann::ordered_json report_json(const AllResults& all, const DatabaseInstance& db,
                                   bool include_timing) {
    nlohmann::ordered_json j;
    j["end"] = report_json(all.end_state, db, include_timing);
    j["stage"] = report_json(all.stage, db, include_timing);
    j["step"] = report_json(all.step, db, include_timing);
    j["independent"] = report_json(all.independent, db, include_timing);

    nlohmann::ordered_json c;
    c["stage_subset_of_end"] = all.comparison.stage_subset_of_end;
    c["step_subset_of_end"] = all.comparison.step_subset_of_end;
    c["step_equals_stage"] = all.comparison.step_equals_stage;
    c["independent_subset_of_stage"] = all.comparison.independent_subset_of_stage;
    c["independent_subset_of_step"] = all.comparison.independent_subset_of_step;
    c["end_size"] = all.comparison.end_size;
    c["stage_size"] = all.comparison.stage_size;
    c["step_size"] = all.comparison.step_size;
    c["independent_size"] = all.comparison.independent_size;
    j["comparison"] = std::move(c);
    return j;
}

std::string report_text(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace deltarep
