// SPDX-License-Identifier: Apache-2.0
#include "crag/kgql/parser.hpp"

namespace crag::kgql {
namespace {

bool is_ident_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

// First word of a line, used to decide whether the line is program text.
std::string_view leading_word(std::string_view line) {
    std::size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && is_ident_char(line[j])) ++j;
    return line.substr(i, j - i);
}

class StatementParser {
public:
    StatementParser(const std::vector<Token>& tokens, std::size_t end_offset, const Dialect& dialect)
        : toks_(tokens), end_offset_(end_offset), dialect_(dialect) {}

    bool at_end() const { return pos_ >= toks_.size(); }

    /// Parses `statement { ';' statement }` over the whole line.
    void parse_line(std::vector<Statement>& out) {
        while (!at_end()) {
            if (peek(TokenKind::Semicolon)) {
                ++pos_;
                continue;
            }
            out.push_back(parse_statement());
            if (!at_end()) expect(TokenKind::Semicolon, "';' or end of line");
        }
    }

private:
    const Token* cur() const { return at_end() ? nullptr : &toks_[pos_]; }
    bool peek(TokenKind k, std::size_t ahead = 0) const {
        return pos_ + ahead < toks_.size() && toks_[pos_ + ahead].kind == k;
    }
    std::size_t offset() const { return at_end() ? end_offset_ : toks_[pos_].offset; }

    [[noreturn]] void fail(const std::string& msg, const std::string& expected) const {
        throw ParseError(msg, offset(), expected);
    }

    const Token& expect(TokenKind k, const std::string& expected) {
        if (!peek(k)) {
            std::string got = at_end() ? "end of line" : std::string(to_string(cur()->kind));
            fail("expected " + expected + ", got " + got, expected);
        }
        return toks_[pos_++];
    }

    Statement parse_statement() {
        Statement st;
        while (peek(TokenKind::All) || peek(TokenKind::Avg)) {
            if (peek(TokenKind::All)) st.modifiers.all = true;
            else st.modifiers.avg = true;
            ++pos_;
        }
        if (!peek(TokenKind::Ident)) fail("expected an API call or sort", "function name");
        const std::string& name = cur()->text;
        if (name == "sort") {
            ++pos_;
            st.body = parse_sort();
        } else if (const auto* spec = dialect_.find(name)) {
            ++pos_;
            st.body = parse_call(*spec);
        } else {
            fail("unknown function '" + name + "'", "function name");
        }
        while (peek(TokenKind::Projection) || peek(TokenKind::Slice)) {
            const Token& t = toks_[pos_];
            if (t.kind == TokenKind::Projection) {
                if (st.projection) fail("duplicate projection", "';' or end of line");
                st.projection = ProjectionSpec{t.text};
            } else {
                if (st.modifiers.slice) fail("duplicate slice", "';' or end of line");
                if (t.count < 1) fail("slice bound must be at least 1", "[:n] with n >= 1");
                st.modifiers.slice = t.count;
            }
            ++pos_;
        }
        return st;
    }

    // Items inside a call: entity args first, then an optional condition slot.
    using Item = std::variant<Arg, std::vector<Condition>>;

    ApiCall parse_call(const FunctionSpec& spec) {
        const std::size_t call_offset = toks_[pos_ - 1].offset;
        expect(TokenKind::LParen, "'('");
        std::vector<Item> items;
        if (!peek(TokenKind::RParen)) {
            items.push_back(parse_item());
            while (peek(TokenKind::Comma)) {
                ++pos_;
                items.push_back(parse_item());
            }
        }
        expect(TokenKind::RParen, "')' or ','");

        const std::string fname(spec.name);
        const std::size_t n = spec.entity_args;
        auto arity_error = [&] {
            throw ParseError(fname + " expects " + std::to_string(n) +
                                 " entity argument(s) plus an optional condition, got " +
                                 std::to_string(items.size()),
                             call_offset, fname + " arguments");
        };
        if (items.size() != n && items.size() != n + 1) arity_error();

        ApiCall call;
        call.function = spec.function;
        for (std::size_t i = 0; i < n; ++i) {
            const auto* arg = std::get_if<Arg>(&items[i]);
            if (!arg) {
                throw ParseError(fname + ": condition given where an entity argument is expected",
                                 call_offset, "entity argument");
            }
            call.args.push_back(*arg);
        }
        if (items.size() == n + 1) {
            if (auto* conds = std::get_if<std::vector<Condition>>(&items[n])) {
                call.conditions = std::move(*conds);
            } else if (std::get<Arg>(items[n]).kind != Arg::Kind::None) {
                throw ParseError(fname + ": the last argument must be a condition, a list, or None",
                                 call_offset, "condition");
            }
        }
        return call;
    }

    Item parse_item() {
        if (peek(TokenKind::String)) return Arg::string(toks_[pos_++].text);
        if (peek(TokenKind::None)) {
            ++pos_;
            return Arg::none();
        }
        if (peek(TokenKind::Star)) {
            ++pos_;
            return Arg::star();
        }
        if (peek(TokenKind::LBracket)) return parse_condition_list();
        if (peek(TokenKind::Ident)) {
            if (peek(TokenKind::LParen, 1) && parse_cmp_op(cur()->text))
                return std::vector<Condition>{parse_condition()};
            return Arg::string(toks_[pos_++].text);
        }
        fail("expected an argument", "string, None, *, or condition");
    }

    std::vector<Condition> parse_condition_slot() {
        if (peek(TokenKind::None)) {
            ++pos_;
            return {};
        }
        if (peek(TokenKind::LBracket)) return parse_condition_list();
        return {parse_condition()};
    }

    std::vector<Condition> parse_condition_list() {
        expect(TokenKind::LBracket, "'['");
        std::vector<Condition> out;
        if (!peek(TokenKind::RBracket)) {
            out.push_back(parse_condition());
            while (peek(TokenKind::Comma)) {
                ++pos_;
                out.push_back(parse_condition());
            }
        }
        expect(TokenKind::RBracket, "']' or ','");
        return out;
    }

    Condition parse_condition() {
        if (!peek(TokenKind::Ident)) fail("expected a comparison", "eq, neq, ge or le");
        auto op = parse_cmp_op(cur()->text);
        if (!op) fail("unknown comparison '" + cur()->text + "'", "eq, neq, ge or le");
        ++pos_;
        expect(TokenKind::LParen, "'('");
        Condition c;
        c.op = *op;
        c.key = parse_key();
        expect(TokenKind::Comma, "','");
        c.value = parse_value();
        expect(TokenKind::RParen, "')'");
        return c;
    }

    std::string parse_key() {
        if (peek(TokenKind::Ident) || peek(TokenKind::String)) {
            std::string k = toks_[pos_++].text;
            if (k.empty()) fail("empty key", "key name");
            return k;
        }
        fail("expected a key name", "key name");
    }

    Literal parse_value() {
        if (peek(TokenKind::String)) return toks_[pos_++].text;
        if (peek(TokenKind::Number)) return toks_[pos_++].number;
        if (peek(TokenKind::Minus) && peek(TokenKind::Number, 1)) {
            pos_ += 2;
            return -toks_[pos_ - 1].number;
        }
        if (peek(TokenKind::Ident)) {
            const std::string& w = toks_[pos_++].text;
            if (w == "true") return true;
            if (w == "false") return false;
            return w;
        }
        fail("expected a value", "string, number or boolean");
    }

    SortSpec parse_sort() {
        expect(TokenKind::LParen, "'('");
        SortSpec s;
        s.conditions = parse_condition_slot();
        expect(TokenKind::Comma, "','");
        if (peek(TokenKind::Minus)) {
            ++pos_;
            s.descending = true;
        }
        if (peek(TokenKind::String) && !s.descending && !cur()->text.empty() && cur()->text.front() == '-') {
            s.descending = true;
            s.key = cur()->text.substr(1);
            ++pos_;
            if (s.key.empty()) fail("empty sort key", "key name");
        } else {
            s.key = parse_key();
        }
        expect(TokenKind::RParen, "')'");
        return s;
    }

    const std::vector<Token>& toks_;
    std::size_t pos_ = 0;
    std::size_t end_offset_;
    const Dialect& dialect_;
};

bool starts_program_line(std::string_view word, const Dialect& dialect) {
    return word == "sort" || word == "ALL" || word == "AVG" || dialect.find(word) != nullptr;
}

}  // namespace

QueryProgram parse_program(std::string_view source, const Dialect& dialect) {
    QueryProgram program;
    std::size_t line_start = 0;
    while (line_start <= source.size()) {
        auto nl = source.find('\n', line_start);
        std::size_t line_end = nl == std::string_view::npos ? source.size() : nl;
        auto line = source.substr(line_start, line_end - line_start);
        if (starts_program_line(leading_word(line), dialect)) {
            auto tokens = tokenize(line, line_start);
            StatementParser(tokens, line_end, dialect).parse_line(program.statements);
        }
        if (nl == std::string_view::npos) break;
        line_start = nl + 1;
    }
    if (program.statements.empty()) throw ParseError("empty program", 0, "API call");
    if (program.statements.front().is_sort())
        throw ParseError("sort must follow an API call", 0, "API call");
    return program;
}

}  // namespace crag::kgql
