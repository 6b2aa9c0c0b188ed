#include "deltarep/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace deltarep {
namespace {

enum class Tok { ident, integer, string, lparen, rparen, comma, dot, minus, turnstile, cmp, end };

struct Token {
    Tok kind;
    std::string text;      // ident name, comparison operator, or string payload
    std::int64_t number = 0;
    int line = 1;
};

class Lexer {
  public:
    Lexer(const std::string& src, std::vector<ParseError>& errors) : src_(src), errors_(errors) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space();
            if (pos_ >= src_.size()) break;
            char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
                continue;
            }
            int line = line_;
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::string name;
                while (pos_ < src_.size() &&
                       (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                    name += src_[pos_++];
                out.push_back({Tok::ident, std::move(name), 0, line});
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                out.push_back(lex_number(line));
            } else if (c == '"') {
                out.push_back(lex_string(line));
            } else if (c == '(') {
                ++pos_; out.push_back({Tok::lparen, "(", 0, line});
            } else if (c == ')') {
                ++pos_; out.push_back({Tok::rparen, ")", 0, line});
            } else if (c == ',') {
                ++pos_; out.push_back({Tok::comma, ",", 0, line});
            } else if (c == '.') {
                ++pos_; out.push_back({Tok::dot, ".", 0, line});
            } else if (c == '-') {
                ++pos_; out.push_back({Tok::minus, "-", 0, line});
            } else if (c == ':') {
                if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
                    pos_ += 2; out.push_back({Tok::turnstile, ":-", 0, line});
                } else {
                    ++pos_; errors_.push_back({line, "stray ':' (expected ':-')"});
                }
            } else if (c == '!' ) {
                if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
                    pos_ += 2; out.push_back({Tok::cmp, "!=", 0, line});
                } else {
                    ++pos_; errors_.push_back({line, "stray '!' (expected '!=')"});
                }
            } else if (c == '<' || c == '>') {
                std::string op(1, c);
                ++pos_;
                if (pos_ < src_.size() && src_[pos_] == '=') { op += '='; ++pos_; }
                out.push_back({Tok::cmp, std::move(op), 0, line});
            } else if (c == '=') {
                ++pos_; out.push_back({Tok::cmp, "=", 0, line});
            } else {
                ++pos_;
                errors_.push_back({line, std::string("unexpected character '") + c + "'"});
            }
        }
        out.push_back({Tok::end, "", 0, line_});
        return out;
    }

  private:
    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
            if (src_[pos_] == '\n') ++line_;
            ++pos_;
        }
    }

    Token lex_number(int line) {
        std::int64_t n = 0;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
            n = n * 10 + (src_[pos_++] - '0');
        return {Tok::integer, "", n, line};
    }

    Token lex_string(int line) {
        ++pos_;  // opening quote
        std::string payload;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '"') { ++pos_; return {Tok::string, std::move(payload), 0, line}; }
            if (c == '\n') break;
            if (c == '\\' && pos_ + 1 < src_.size() &&
                (src_[pos_ + 1] == '"' || src_[pos_ + 1] == '\\')) {
                payload += src_[pos_ + 1];
                pos_ += 2;
                continue;
            }
            payload += c;
            ++pos_;
        }
        errors_.push_back({line, "unterminated string"});
        return {Tok::string, std::move(payload), 0, line};
    }

    const std::string& src_;
    std::vector<ParseError>& errors_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

CompareOp compare_op(const std::string& text) {
    if (text == "=") return CompareOp::eq;
    if (text == "!=") return CompareOp::ne;
    if (text == "<") return CompareOp::lt;
    if (text == ">") return CompareOp::gt;
    if (text == "<=") return CompareOp::le;
    return CompareOp::ge;
}

bool is_variable_name(const std::string& name) {
    return !name.empty() && (std::islower(static_cast<unsigned char>(name[0])) || name[0] == '_');
}

// Raw (pre-validation) shapes, so error reporting can mention source names.
struct RawAtom {
    bool is_delta = false;
    std::string relation;
    std::vector<Term> terms;
    int line = 1;
};

struct RawRule {
    RawAtom head;
    std::vector<RawAtom> body;
    std::vector<Comparison> comparisons;
    int line = 1;
};

class Parser {
  public:
    Parser(std::vector<Token> toks, std::vector<ParseError>& errors)
        : toks_(std::move(toks)), errors_(errors) {}

    std::vector<RawRule> run() {
        std::vector<RawRule> rules;
        while (peek().kind != Tok::end) {
            std::size_t before = errors_.size();
            std::optional<RawRule> r = parse_rule();
            if (r && errors_.size() == before) {
                rules.push_back(std::move(*r));
            } else {
                // resynchronize at the statement terminator
                while (peek().kind != Tok::dot && peek().kind != Tok::end) advance();
                if (peek().kind == Tok::dot) advance();
            }
        }
        return rules;
    }

  private:
    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    const Token& advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    bool accept(Tok k) {
        if (peek().kind != k) return false;
        advance();
        return true;
    }
    void fail(const std::string& msg) { errors_.push_back({peek().line, msg}); }

    std::optional<RawRule> parse_rule() {
        RawRule rule;
        rule.line = peek().line;
        if (!accept(Tok::minus)) {
            fail("rule must start with a deletion atom ('-Relation(...)')");
            return std::nullopt;
        }
        auto head = parse_atom_after_minus();
        if (!head) return std::nullopt;
        rule.head = std::move(*head);
        if (!accept(Tok::turnstile)) {
            fail("expected ':-' after rule head");
            return std::nullopt;
        }
        while (true) {
            if (!parse_body_item(rule)) return std::nullopt;
            if (accept(Tok::comma)) continue;
            break;
        }
        if (!accept(Tok::dot)) {
            fail("expected '.' at end of rule");
            return std::nullopt;
        }
        return rule;
    }

    bool parse_body_item(RawRule& rule) {
        if (peek().kind == Tok::minus && peek(1).kind == Tok::ident && peek(2).kind == Tok::lparen) {
            advance();
            auto a = parse_atom_after_minus();
            if (!a) return false;
            a->is_delta = true;
            rule.body.push_back(std::move(*a));
            return true;
        }
        if (peek().kind == Tok::ident && peek(1).kind == Tok::lparen) {
            auto a = parse_atom_after_minus();
            if (!a) return false;
            rule.body.push_back(std::move(*a));
            return true;
        }
        return parse_comparison(rule);
    }

    // Parses IDENT '(' terms ')'; the caller has consumed any '-' marker.
    std::optional<RawAtom> parse_atom_after_minus() {
        RawAtom atom;
        atom.line = peek().line;
        if (peek().kind != Tok::ident) {
            fail("expected relation name");
            return std::nullopt;
        }
        atom.relation = advance().text;
        if (!accept(Tok::lparen)) {
            fail("expected '(' after relation name");
            return std::nullopt;
        }
        if (!accept(Tok::rparen)) {
            while (true) {
                auto t = parse_term();
                if (!t) return std::nullopt;
                atom.terms.push_back(std::move(*t));
                if (accept(Tok::comma)) continue;
                if (accept(Tok::rparen)) break;
                fail("expected ',' or ')' in term list");
                return std::nullopt;
            }
        }
        return atom;
    }

    std::optional<Term> parse_term() {
        const Token& t = peek();
        if (t.kind == Tok::ident) {
            if (!is_variable_name(t.text)) {
                fail("'" + t.text + "': variables are lower-case; text constants use double quotes");
                return std::nullopt;
            }
            advance();
            return Term::variable(t.text);
        }
        if (t.kind == Tok::integer) {
            advance();
            return Term::constant(Value(t.number));
        }
        if (t.kind == Tok::string) {
            advance();
            return Term::constant(Value(t.text));
        }
        if (t.kind == Tok::minus && peek(1).kind == Tok::integer) {
            advance();
            return Term::constant(Value(-advance().number));
        }
        fail("expected a variable or constant");
        return std::nullopt;
    }

    bool parse_comparison(RawRule& rule) {
        auto lhs = parse_term();
        if (!lhs) return false;
        if (peek().kind != Tok::cmp) {
            fail("expected a comparison operator");
            return false;
        }
        CompareOp op = compare_op(advance().text);
        auto rhs = parse_term();
        if (!rhs) return false;
        rule.comparisons.push_back(Comparison{std::move(*lhs), op, std::move(*rhs)});
        return true;
    }

    std::vector<Token> toks_;
    std::vector<ParseError>& errors_;
    std::size_t pos_ = 0;
};

class Validator {
  public:
    Validator(const SchemaPtr& schema, std::vector<ParseError>& errors)
        : schema_(schema), errors_(errors) {}

    std::vector<DeltaRule> run(const std::vector<RawRule>& raw) {
        std::vector<DeltaRule> rules;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            std::size_t before = errors_.size();
            DeltaRule checked = check_rule(raw[i], static_cast<std::uint32_t>(i));
            if (errors_.size() == before) rules.push_back(std::move(checked));
        }
        check_acyclic(raw, rules);
        return rules;
    }

  private:
    void error(int line, const std::string& msg) {
        // A rule mentioning, say, an unknown relation in both head and body
        // would otherwise report the identical message twice.
        for (const auto& e : errors_)
            if (e.line == line && e.message == msg) return;
        errors_.push_back({line, msg});
    }

    std::optional<Atom> resolve_atom(const RawAtom& a) {
        auto rel = schema_->relation_id(a.relation);
        if (!rel) {
            error(a.line, "unknown relation " + a.relation);
            return std::nullopt;
        }
        const RelationSchema& rs = schema_->relation(*rel);
        if (a.terms.size() != rs.arity()) {
            error(a.line, a.relation + ": expected " + std::to_string(rs.arity()) +
                              " terms, got " + std::to_string(a.terms.size()));
            return std::nullopt;
        }
        return Atom{*rel, a.is_delta, a.terms};
    }

    // Records the kind a variable is used at, or flags a conflict.
    void note_var_kind(std::map<std::string, ValueKind>& kinds, const std::string& var,
                       ValueKind kind, int line) {
        auto [it, fresh] = kinds.emplace(var, kind);
        if (!fresh && it->second != kind)
            error(line, "variable " + var + " is used at both int and text positions");
    }

    DeltaRule check_rule(const RawRule& raw, std::uint32_t rule_id) {
        DeltaRule rule;
        rule.rule_id = rule_id;

        auto head = resolve_atom(raw.head);
        std::vector<Atom> body;
        std::map<std::string, ValueKind> var_kinds;
        std::unordered_set<std::string> body_vars;

        for (const RawAtom& ra : raw.body) {
            auto a = resolve_atom(ra);
            if (!a) continue;
            const RelationSchema& rs = schema_->relation(a->relation);
            for (std::uint32_t i = 0; i < a->terms.size(); ++i) {
                const Term& t = a->terms[i];
                if (t.is_variable()) {
                    body_vars.insert(t.var());
                    note_var_kind(var_kinds, t.var(), rs.attribute(i).kind, ra.line);
                } else if (t.value().kind() != rs.attribute(i).kind) {
                    error(ra.line, rs.name() + "." + rs.attribute(i).name + ": constant " +
                                       t.value().to_string() + " has the wrong kind");
                }
            }
            body.push_back(std::move(*a));
        }

        if (head) {
            const RelationSchema& rs = schema_->relation(head->relation);
            for (std::uint32_t i = 0; i < head->terms.size(); ++i) {
                const Term& t = head->terms[i];
                if (t.is_variable()) {
                    if (!body_vars.contains(t.var()))
                        error(raw.head.line, "head variable " + t.var() + " not bound in the body");
                } else if (t.value().kind() != rs.attribute(i).kind) {
                    error(raw.head.line, rs.name() + "." + rs.attribute(i).name + ": constant " +
                                             t.value().to_string() + " has the wrong kind");
                }
            }
            bool matched = false;
            for (std::uint32_t i = 0; i < body.size(); ++i) {
                if (!body[i].is_delta && body[i].relation == head->relation &&
                    body[i].terms == head->terms) {
                    rule.head_body_atom = i;
                    matched = true;
                    break;
                }
            }
            if (!matched)
                error(raw.line, "body must repeat the head atom without the deletion marker");
            rule.head = std::move(*head);
            rule.head.is_delta = true;
        }

        for (const Comparison& c : raw.comparisons) {
            std::optional<ValueKind> lk = term_kind(c.lhs, var_kinds, raw.line);
            std::optional<ValueKind> rk = term_kind(c.rhs, var_kinds, raw.line);
            if (c.lhs.is_constant() && c.rhs.is_constant())
                error(raw.line, "comparison between two constants");
            if (lk && rk && *lk != *rk)
                error(raw.line, "comparison mixes int and text operands");
        }
        rule.body = std::move(body);
        rule.comparisons = raw.comparisons;
        return rule;
    }

    std::optional<ValueKind> term_kind(const Term& t, const std::map<std::string, ValueKind>& kinds,
                                       int line) {
        if (t.is_constant()) return t.value().kind();
        auto it = kinds.find(t.var());
        if (it == kinds.end()) {
            error(line, "comparison variable " + t.var() + " not bound by any body atom");
            return std::nullopt;
        }
        return it->second;
    }

    // Deletion relations must not depend on themselves: an edge B -> H exists
    // when a rule deleting from H mentions -B in its body.
    void check_acyclic(const std::vector<RawRule>& raw, const std::vector<DeltaRule>& rules) {
        std::map<std::uint32_t, std::vector<std::pair<std::uint32_t, const DeltaRule*>>> edges;
        for (const DeltaRule& r : rules)
            for (const Atom& a : r.body)
                if (a.is_delta) edges[a.relation].push_back({r.head.relation, &r});

        std::unordered_map<std::uint32_t, int> state;  // 0 new, 1 open, 2 done
        std::vector<std::uint32_t> stack;
        auto dfs = [&](auto&& self, std::uint32_t rel) -> bool {
            state[rel] = 1;
            stack.push_back(rel);
            for (auto [next, rule] : edges[rel]) {
                if (state[next] == 1) {
                    std::string cycle;
                    auto it = std::find(stack.begin(), stack.end(), next);
                    for (; it != stack.end(); ++it)
                        cycle += schema_->relation(*it).name() + " -> ";
                    cycle += schema_->relation(next).name();
                    error(line_of(raw, rule->rule_id),
                          "cyclic dependency among deletion relations: " + cycle);
                    return false;
                }
                if (state[next] == 0 && !self(self, next)) return false;
            }
            stack.pop_back();
            state[rel] = 2;
            return true;
        };
        for (const auto& [rel, _] : edges)
            if (state[rel] == 0 && !dfs(dfs, rel)) return;
    }

    int line_of(const std::vector<RawRule>& raw, std::uint32_t rule_id) const {
        return rule_id < raw.size() ? raw[rule_id].line : 0;
    }

    const SchemaPtr& schema_;
    std::vector<ParseError>& errors_;
};

}  // namespace

ParseResult parse_program(const std::string& text, SchemaPtr schema) {
    ParseResult result;
    if (!schema) {
        result.errors.push_back({0, "null schema"});
        return result;
    }
    Lexer lexer(text, result.errors);
    std::vector<Token> tokens = lexer.run();
    Parser parser(std::move(tokens), result.errors);
    std::vector<RawRule> raw = parser.run();
    Validator validator(schema, result.errors);
    std::vector<DeltaRule> rules = validator.run(raw);
    if (result.errors.empty())
        result.program = DeltaProgram{std::move(schema), std::move(rules)};
    return result;
}

std::string format_errors(const std::vector<ParseError>& errors) {
    std::string out;
    for (const ParseError& e : errors) {
        if (!out.empty()) out += '\n';
        out += "line " + std::to_string(e.line) + ": " + e.message;
    }
    return out;
}

}  // namespace deltarep
