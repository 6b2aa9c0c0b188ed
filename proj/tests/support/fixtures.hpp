#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "deltarep/instance.hpp"
#include "deltarep/io.hpp"
#include "deltarep/parser.hpp"
#include "deltarep/rule.hpp"

namespace testsupport {

inline std::string data_dir() { return DELTAREP_TEST_DATA_DIR; }

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("fixture missing: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return std::move(out).str();
}

struct LoadedCase {
    deltarep::DatabaseInstance db;
    deltarep::DeltaProgram program;
};

// Loads tests/data/<name>/{schema.txt,*.csv,program.rules}.
inline LoadedCase load_case(const std::string& name) {
    std::string dir = data_dir() + "/" + name;
    deltarep::DatabaseInstance db = deltarep::load_directory(dir);
    auto pr = deltarep::parse_program(read_text(dir + "/program.rules"), db.schema());
    if (!pr.ok())
        throw std::runtime_error(name + ": " + deltarep::format_errors(pr.errors));
    return {std::move(db), std::move(*pr.program)};
}

// Parses a program against an existing schema, throwing on any error so
// tests can build programs from string literals tersely.
inline deltarep::DeltaProgram parse_or_throw(const std::string& text,
                                             const deltarep::SchemaPtr& schema) {
    auto pr = deltarep::parse_program(text, schema);
    if (!pr.ok()) throw std::runtime_error(deltarep::format_errors(pr.errors));
    return std::move(*pr.program);
}

inline deltarep::TupleId tid(const deltarep::DatabaseInstance& db, const std::string& label) {
    auto id = db.parse_label(label);
    if (!id) throw std::runtime_error("no such tuple: " + label);
    return *id;
}

inline std::vector<deltarep::TupleId> tids(const deltarep::DatabaseInstance& db,
                                           const std::vector<std::string>& labels) {
    std::vector<deltarep::TupleId> out;
    out.reserve(labels.size());
    for (const auto& l : labels) out.push_back(tid(db, l));
    return out;
}

inline std::vector<std::string> labels_of(const deltarep::DatabaseInstance& db,
                                          const std::vector<deltarep::TupleId>& ids) {
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (auto id : ids) out.push_back(db.label(id));
    return out;
}

}  // namespace testsupport
