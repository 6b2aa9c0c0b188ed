#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "deltarep/instance.hpp"
#include "deltarep/schema.hpp"

namespace deltarep {

// Schema text format: one relation per line, e.g.
//
//     Grant(gid:int, name:text)
//
// Blank lines and '#' comments are allowed.  Attribute kinds are `int` and
// `text`.  Throws FormatError on malformed input.
SchemaPtr parse_schema_text(const std::string& text);
std::string schema_to_text(const Schema& schema);

// Parses one headerless RFC 4180 CSV document into rows of raw fields.
// Quoted fields may contain commas, newlines and doubled quotes.  Lines that
// are entirely empty are skipped.  Throws FormatError on dangling quotes or
// stray characters after a closing quote.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);
std::string to_csv(const std::vector<std::vector<std::string>>& rows);

// Converts raw CSV fields into typed values for one relation.  Integer
// fields must parse fully (optional sign, digits only); anything else is a
// FormatError naming the relation and row.
std::vector<std::vector<Value>> typed_rows(const RelationSchema& rel,
                                           const std::vector<std::vector<std::string>>& raw);

// A database directory holds `schema.txt` plus one `<Relation>.csv` per
// relation.  A missing CSV file is an empty relation.  Extra files are
// ignored, except `<Relation>.delta.csv`: those rows load as the already
// deleted side, so a saved repair round-trips.  A row appearing in both
// files is a FormatError.
DatabaseInstance load_directory(const std::filesystem::path& dir);

// Writes `schema.txt` and one CSV per relation with the live rows.  Deleted
// rows, if any, go to `<Relation>.delta.csv` so a repair stays inspectable.
// Creates the directory if needed.
void save_directory(const DatabaseInstance& db, const std::filesystem::path& dir);

}  // namespace deltarep
