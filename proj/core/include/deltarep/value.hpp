#pragma once

#include <compare>
#include <concepts>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace deltarep {

enum class ValueKind { integer, text };

const char* to_string(ValueKind k);

/// A single attribute value: a 64-bit integer or a UTF-8 string.
/// Ordering is numeric for integers and bytewise lexicographic for text;
/// comparing values of different kinds is a programming error and callers
/// are expected to type-check first (mixed-kind order falls back to kind).
class Value {
  public:
    Value() : v_(std::int64_t{0}) {}
    // Template so that Value(0) is an exact match here and never ambiguous
    // against the const char* overload (0 is also a null pointer constant).
    template <std::integral T>
        requires(!std::same_as<T, bool>)
    Value(T i) : v_(static_cast<std::int64_t>(i)) {}
    Value(std::string s) : v_(std::move(s)) {}
    Value(const char* s) : v_(std::string(s)) {}

    ValueKind kind() const {
        return std::holds_alternative<std::int64_t>(v_) ? ValueKind::integer : ValueKind::text;
    }
    std::int64_t as_int() const { return std::get<std::int64_t>(v_); }
    const std::string& as_text() const { return std::get<std::string>(v_); }

    bool operator==(const Value& o) const = default;
    std::strong_ordering operator<=>(const Value& o) const {
        if (v_.index() != o.v_.index()) return v_.index() <=> o.v_.index();
        if (kind() == ValueKind::integer) return as_int() <=> o.as_int();
        return as_text().compare(o.as_text()) <=> 0;
    }

    /// Rendered form: bare integer, or text in double quotes with \" and \\ escapes.
    std::string to_string() const;

  private:
    std::variant<std::int64_t, std::string> v_;
};

std::size_t hash_value(const Value& v);

struct ValueVectorHash {
    std::size_t operator()(const std::vector<Value>& vs) const;
};

}  // namespace deltarep
