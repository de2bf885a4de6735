// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "crag/kgql/ast.hpp"

namespace crag::kgql {

class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, std::size_t offset, std::string expected = {})
        : std::runtime_error(message), offset_(offset), expected_(std::move(expected)) {}

    std::size_t offset() const { return offset_; }
    const std::string& expected() const { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

enum class TokenKind {
    Ident,
    Number,
    String,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Minus,
    Star,
    Semicolon,
    Newline,
    Projection,  // ["key"] or [key]
    Slice,       // [:n]
    None,
    All,
    Avg,
};

std::string_view to_string(TokenKind k);

struct Token {
    TokenKind kind;
    std::string text;       // identifier, decoded string, or projection key
    double number = 0.0;    // Number
    std::size_t count = 0;  // Slice
    std::size_t offset = 0;

    friend bool operator==(const Token&, const Token&) = default;
};

/// Total over arbitrary bytes: returns tokens or throws ParseError.
/// `base_offset` is added to every reported offset.
std::vector<Token> tokenize(std::string_view source, std::size_t base_offset = 0);

/// Parses regularized API text. Lines that do not start with a dialect
/// function name, `sort`, `ALL` or `AVG` are skipped as prose.
QueryProgram parse_program(std::string_view source, const Dialect& dialect = movie_dialect());

/// Canonical text: one statement per line, quoted strings, ", " separators.
std::string format_program(const QueryProgram& program, const Dialect& dialect = movie_dialect());
std::string format_statement(const Statement& statement, const Dialect& dialect = movie_dialect());
std::string format_condition(const Condition& c);
std::string format_literal(const Literal& v);
std::string quote_string(std::string_view s);

}  // namespace crag::kgql
