#pragma once

#include <string>

#include "json.hpp"

#include "deltarep/instance.hpp"
#include "deltarep/repair.hpp"
#include "deltarep/repair_result.hpp"

namespace deltarep {

// JSON shapes mirror the result structs field for field.  Deleted tuples are
// reported as {"id": "Relation:ordinal", "values": [...]} and stay sorted by
// id.  With `include_timing` off, wall_seconds and the phase table are
// omitted so reports for the same input are byte-identical across runs.
nlohmann::ordered_json report_json(const RepairResult& result, const DatabaseInstance& db,
                                   bool include_timing = true);
nlohmann::ordered_json report_json(const AllResults& all, const DatabaseInstance& db,
                                   bool include_timing = true);

// Serialized with two-space indentation and a trailing newline.
std::string report_text(const nlohmann::ordered_json& j);

}  // namespace deltarep
