#include "deltarep/value.hpp"

namespace deltarep {

const char* to_string(ValueKind k) {
    return k == ValueKind::integer ? "int" : "text";
}

std::string Value::to_string() const {
    if (kind() == ValueKind::integer) return std::to_string(as_int());
    std::string out = "\"";
    for (char c : as_text()) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

std::size_t hash_value(const Value& v) {
    if (v.kind() == ValueKind::integer)
        return std::hash<std::int64_t>{}(v.as_int());
    return std::hash<std::string>{}(v.as_text());
}

std::size_t ValueVectorHash::operator()(const std::vector<Value>& vs) const {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (const Value& v : vs)
        h = h * 0x100000001b3ull ^ hash_value(v);
    return h;
}

}  // namespace deltarep
