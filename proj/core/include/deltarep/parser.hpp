#pragma once

#include <optional>
#include <string>
#include <vector>

#include "deltarep/rule.hpp"
#include "deltarep/schema.hpp"

namespace deltarep {

struct ParseError {
    int line = 0;
    std::string message;
};

struct ParseResult {
    std::optional<DeltaProgram> program;  // set iff errors is empty
    std::vector<ParseError> errors;

    bool ok() const { return errors.empty(); }
};

/// Parses and validates a rule program against `schema`.
///
/// Program text: one rule per statement, terminated by '.', deletion atoms
/// marked with a leading '-', '#' comments to end of line.  Variables are
/// lower-case identifiers, text constants are double-quoted, integers bare.
///
/// All problems are collected (with line numbers) rather than stopping at
/// the first: syntax errors, unknown relations, arity mismatches, unsafe
/// variables, missing head-matching body atoms, kind conflicts, comparisons
/// mixing kinds or using only constants, and cyclic dependencies among
/// deletion relations.
ParseResult parse_program(const std::string& text, SchemaPtr schema);

/// Convenience wrapper: formats all errors into one message.
std::string format_errors(const std::vector<ParseError>& errors);

}  // namespace deltarep
