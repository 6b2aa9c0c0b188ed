#include "deltarep/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <string_view>
#include <system_error>

#include "deltarep/errors.hpp"

namespace deltarep {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream out;
    out << in.rdbuf();
    if (in.bad()) throw IoError("cannot read " + path.string());
    return std::move(out).str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    out.flush();
    if (!out) throw IoError("cannot write " + path.string());
}

std::string csv_field(const Value& v) {
    if (v.kind() == ValueKind::integer) return std::to_string(v.as_int());
    return v.as_text();
}

}  // namespace

SchemaPtr parse_schema_text(const std::string& text) {
    std::vector<RelationSchema> relations;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::string_view line = trim(raw);
        if (line.empty()) continue;

        auto fail = [&](const std::string& what) -> FormatError {
            return FormatError("schema line " + std::to_string(lineno) + ": " + what);
        };
        auto open = line.find('(');
        if (open == std::string_view::npos || line.back() != ')')
            throw fail("expected Relation(attr:kind, ...)");
        std::string name(trim(line.substr(0, open)));
        if (!is_identifier(name)) throw fail("bad relation name '" + name + "'");

        std::vector<Attribute> attrs;
        std::string_view inner = line.substr(open + 1, line.size() - open - 2);
        if (!trim(inner).empty()) {
            std::size_t pos = 0;
            while (true) {
                auto comma = inner.find(',', pos);
                std::string_view part =
                    trim(inner.substr(pos, comma == std::string_view::npos ? comma : comma - pos));
                auto colon = part.find(':');
                if (colon == std::string_view::npos)
                    throw fail("attribute '" + std::string(part) + "' needs a kind, e.g. name:text");
                std::string aname(trim(part.substr(0, colon)));
                std::string_view akind = trim(part.substr(colon + 1));
                if (!is_identifier(aname)) throw fail("bad attribute name '" + aname + "'");
                ValueKind kind;
                if (akind == "int")
                    kind = ValueKind::integer;
                else if (akind == "text")
                    kind = ValueKind::text;
                else
                    throw fail("unknown kind '" + std::string(akind) + "' (use int or text)");
                attrs.push_back({std::move(aname), kind});
                if (comma == std::string_view::npos) break;
                pos = comma + 1;
            }
        }
        try {
            relations.emplace_back(std::move(name), std::move(attrs));
        } catch (const Error& e) {
            throw fail(e.what());
        }
    }
    if (relations.empty()) throw FormatError("schema declares no relations");
    try {
        return std::make_shared<const Schema>(std::move(relations));
    } catch (const Error& e) {
        throw FormatError(e.what());
    }
}

std::string schema_to_text(const Schema& schema) {
    std::string out;
    for (const RelationSchema& rel : schema.relations()) {
        out += rel.name();
        out += '(';
        for (std::uint32_t i = 0; i < rel.arity(); ++i) {
            if (i) out += ", ";
            out += rel.attribute(i).name;
            out += rel.attribute(i).kind == ValueKind::integer ? ":int" : ":text";
        }
        out += ")\n";
    }
    return out;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> fields;
    std::string cur;
    bool in_quotes = false;
    bool was_quoted = false;  // current field started with a quote
    int lineno = 1;

    auto fail = [&](const std::string& what) -> FormatError {
        return FormatError("csv line " + std::to_string(lineno) + ": " + what);
    };
    auto end_field = [&] {
        fields.push_back(std::move(cur));
        cur.clear();
        was_quoted = false;
    };
    auto end_record = [&] {
        bool quoted = was_quoted;
        end_field();
        // A line with no content at all is not a record, but "" is: a
        // quoted empty field makes a one-field record.
        if (fields.size() > 1 || !fields[0].empty() || quoted) rows.push_back(std::move(fields));
        fields.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++lineno;
                cur += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (cur.empty() && !was_quoted) {
                    in_quotes = true;
                    was_quoted = true;
                } else if (was_quoted) {
                    throw fail("unexpected character after closing quote");
                } else {
                    throw fail("quote inside unquoted field");
                }
                break;
            case ',':
                end_field();
                break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
                ++lineno;
                end_record();
                break;
            case '\n':
                ++lineno;
                end_record();
                break;
            default:
                if (was_quoted) throw fail("unexpected character after closing quote");
                cur += c;
        }
    }
    if (in_quotes) throw fail("unterminated quoted field");
    if (!fields.empty() || !cur.empty() || was_quoted) end_record();
    return rows;
}

std::string to_csv(const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            const std::string& f = row[i];
            bool needs_quotes = f.find_first_of(",\"\n\r") != std::string::npos;
            if (!needs_quotes) {
                out += f;
            } else {
                out += '"';
                for (char c : f) {
                    if (c == '"') out += '"';
                    out += c;
                }
                out += '"';
            }
        }
        out += '\n';
    }
    return out;
}

std::vector<std::vector<Value>> typed_rows(const RelationSchema& rel,
                                           const std::vector<std::vector<std::string>>& raw) {
    std::vector<std::vector<Value>> rows;
    rows.reserve(raw.size());
    for (std::size_t r = 0; r < raw.size(); ++r) {
        const auto& fields = raw[r];
        if (fields.size() != rel.arity())
            throw FormatError(rel.name() + " row " + std::to_string(r + 1) + ": expected " +
                              std::to_string(rel.arity()) + " fields, got " +
                              std::to_string(fields.size()));
        std::vector<Value> values;
        values.reserve(fields.size());
        for (std::uint32_t i = 0; i < fields.size(); ++i) {
            if (rel.attribute(i).kind == ValueKind::text) {
                values.push_back(Value(fields[i]));
                continue;
            }
            const std::string& f = fields[i];
            std::int64_t n = 0;
            auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), n);
            if (ec != std::errc{} || ptr != f.data() + f.size())
                throw FormatError(rel.name() + " row " + std::to_string(r + 1) + ": '" + f +
                                  "' is not an integer for " + rel.attribute(i).name);
            values.push_back(Value(n));
        }
        rows.push_back(std::move(values));
    }
    return rows;
}

DatabaseInstance load_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec))
        throw IoError(dir.string() + " is not a directory");

    auto schema_path = dir / "schema.txt";
    SchemaPtr schema;
    try {
        schema = parse_schema_text(read_file(schema_path));
    } catch (const FormatError& e) {
        throw FormatError(schema_path.string() + ": " + e.what());
    }

    auto read_rows = [&](const RelationSchema& rel, const std::filesystem::path& path) {
        std::vector<std::vector<Value>> out;
        if (!std::filesystem::exists(path, ec)) return out;
        try {
            out = typed_rows(rel, parse_csv(read_file(path)));
        } catch (const FormatError& e) {
            throw FormatError(path.string() + ": " + e.what());
        }
        return out;
    };

    std::vector<std::vector<std::vector<Value>>> rows;
    std::vector<std::vector<std::vector<Value>>> dead;
    rows.reserve(schema->relation_count());
    dead.reserve(schema->relation_count());
    for (const RelationSchema& rel : schema->relations()) {
        auto live = read_rows(rel, dir / (rel.name() + ".csv"));
        auto del = read_rows(rel, dir / (rel.name() + ".delta.csv"));
        if (!del.empty()) {
            std::set<std::vector<Value>> seen(live.begin(), live.end());
            for (const auto& d : del)
                if (seen.contains(d))
                    throw FormatError(rel.name() + ".delta.csv: row also present in " +
                                      rel.name() + ".csv");
            live.insert(live.end(), del.begin(), del.end());
        }
        rows.push_back(std::move(live));
        dead.push_back(std::move(del));
    }

    DatabaseInstance db = DatabaseInstance::from_rows(std::move(schema), std::move(rows));
    std::vector<TupleId> doomed;
    for (std::uint32_t rel = 0; rel < dead.size(); ++rel)
        for (const auto& d : dead[rel]) doomed.push_back(*db.find(rel, d));
    std::sort(doomed.begin(), doomed.end());
    doomed.erase(std::unique(doomed.begin(), doomed.end()), doomed.end());
    return doomed.empty() ? db : apply_deletion(db, doomed);
}

void save_directory(const DatabaseInstance& db, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

    write_file(dir / "schema.txt", schema_to_text(*db.schema()));
    for (std::uint32_t rel = 0; rel < db.relation_count(); ++rel) {
        std::vector<std::vector<std::string>> live;
        std::vector<std::vector<std::string>> deleted;
        for (const Tuple& t : db.rows(rel)) {
            std::vector<std::string> fields;
            fields.reserve(t.values.size());
            for (const Value& v : t.values) fields.push_back(csv_field(v));
            (db.is_live(t.id) ? live : deleted).push_back(std::move(fields));
        }
        const std::string& name = db.schema()->relation(rel).name();
        write_file(dir / (name + ".csv"), to_csv(live));
        auto delta_path = dir / (name + ".delta.csv");
        if (deleted.empty())
            std::filesystem::remove(delta_path, ec);
        else
            write_file(delta_path, to_csv(deleted));
    }
}

}  // namespace deltarep
