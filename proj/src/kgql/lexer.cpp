// SPDX-License-Identifier: Apache-2.0
#include <charconv>
#include <optional>

#include "crag/kgql/parser.hpp"

namespace crag::kgql {
namespace {

bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }

class Lexer {
public:
    Lexer(std::string_view src, std::size_t base) : src_(src), base_(base) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (is_blank(c)) {
                ++pos_;
                continue;
            }
            const std::size_t start = pos_;
            if (c == '\n') {
                out.push_back(simple(TokenKind::Newline, start));
                ++pos_;
            } else if (c == '"' || c == '\'') {
                auto s = scan_string(pos_);
                if (!s) throw ParseError("unterminated string literal", base_ + start, "closing quote");
                out.push_back(Token{TokenKind::String, std::move(s->first), 0.0, 0, base_ + start});
                pos_ = s->second;
            } else if (is_digit(c)) {
                out.push_back(scan_number());
            } else if (is_ident_start(c)) {
                while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
                std::string word(src_.substr(start, pos_ - start));
                TokenKind kind = TokenKind::Ident;
                if (word == "None") kind = TokenKind::None;
                else if (word == "ALL") kind = TokenKind::All;
                else if (word == "AVG") kind = TokenKind::Avg;
                out.push_back(Token{kind, std::move(word), 0.0, 0, base_ + start});
            } else if (c == '[') {
                out.push_back(scan_bracket());
            } else {
                TokenKind kind;
                switch (c) {
                    case '(': kind = TokenKind::LParen; break;
                    case ')': kind = TokenKind::RParen; break;
                    case ']': kind = TokenKind::RBracket; break;
                    case ',': kind = TokenKind::Comma; break;
                    case '-': kind = TokenKind::Minus; break;
                    case '*': kind = TokenKind::Star; break;
                    case ';': kind = TokenKind::Semicolon; break;
                    default:
                        throw ParseError("unexpected character", base_ + start, "token");
                }
                out.push_back(simple(kind, start));
                ++pos_;
            }
        }
        return out;
    }

private:
    Token simple(TokenKind k, std::size_t at) const { return Token{k, {}, 0.0, 0, base_ + at}; }

    // Decodes a quoted literal starting at `at`; returns text and the index
    // one past the closing quote, or nullopt when unterminated.
    std::optional<std::pair<std::string, std::size_t>> scan_string(std::size_t at) const {
        const char quote = src_[at];
        std::string out;
        std::size_t i = at + 1;
        while (i < src_.size()) {
            char c = src_[i];
            if (c == quote) return std::pair{std::move(out), i + 1};
            if (c == '\\') {
                if (i + 1 >= src_.size()) return std::nullopt;
                char e = src_[i + 1];
                switch (e) {
                    case 'n': out.push_back('\n'); break;
                    case 't': out.push_back('\t'); break;
                    case 'r': out.push_back('\r'); break;
                    default: out.push_back(e); break;
                }
                i += 2;
                continue;
            }
            out.push_back(c);
            ++i;
        }
        return std::nullopt;
    }

    Token scan_number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
        if (pos_ + 1 < src_.size() && src_[pos_] == '.' && is_digit(src_[pos_ + 1])) {
            ++pos_;
            while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t j = pos_ + 1;
            if (j < src_.size() && (src_[j] == '+' || src_[j] == '-')) ++j;
            if (j < src_.size() && is_digit(src_[j])) {
                pos_ = j;
                while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
            }
        }
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
        if (ec != std::errc{}) throw ParseError("number out of range", base_ + start, "number");
        return Token{TokenKind::Number, std::string(src_.substr(start, pos_ - start)), v, 0, base_ + start};
    }

    std::size_t skip_blank(std::size_t i) const {
        while (i < src_.size() && is_blank(src_[i])) ++i;
        return i;
    }

    // '[' opens a projection (["key"] / [key]), a slice ([:n]) or a
    // condition list; decided by lookahead without consuming on failure.
    Token scan_bracket() {
        const std::size_t start = pos_;
        std::size_t i = skip_blank(pos_ + 1);
        if (i < src_.size() && (src_[i] == '"' || src_[i] == '\'')) {
            if (auto s = scan_string(i)) {
                std::size_t j = skip_blank(s->second);
                if (j < src_.size() && src_[j] == ']') {
                    pos_ = j + 1;
                    return Token{TokenKind::Projection, std::move(s->first), 0.0, 0, base_ + start};
                }
            }
        } else if (i < src_.size() && is_ident_start(src_[i])) {
            std::size_t j = i;
            while (j < src_.size() && is_ident_char(src_[j])) ++j;
            std::size_t k = skip_blank(j);
            if (k < src_.size() && src_[k] == ']') {
                pos_ = k + 1;
                return Token{TokenKind::Projection, std::string(src_.substr(i, j - i)), 0.0, 0, base_ + start};
            }
        } else if (i < src_.size() && src_[i] == ':') {
            std::size_t j = skip_blank(i + 1);
            std::size_t d = j;
            while (d < src_.size() && is_digit(src_[d])) ++d;
            std::size_t k = skip_blank(d);
            if (d > j && k < src_.size() && src_[k] == ']') {
                std::size_t n = 0;
                auto [ptr, ec] = std::from_chars(src_.data() + j, src_.data() + d, n);
                if (ec != std::errc{}) throw ParseError("slice bound out of range", base_ + j, "integer");
                pos_ = k + 1;
                return Token{TokenKind::Slice, {}, 0.0, n, base_ + start};
            }
            throw ParseError("malformed slice", base_ + start, "[:n]");
        }
        pos_ = start + 1;
        return simple(TokenKind::LBracket, start);
    }

    std::string_view src_;
    std::size_t base_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string_view to_string(TokenKind k) {
    switch (k) {
        case TokenKind::Ident: return "identifier";
        case TokenKind::Number: return "number";
        case TokenKind::String: return "string";
        case TokenKind::LParen: return "'('";
        case TokenKind::RParen: return "')'";
        case TokenKind::LBracket: return "'['";
        case TokenKind::RBracket: return "']'";
        case TokenKind::Comma: return "','";
        case TokenKind::Minus: return "'-'";
        case TokenKind::Star: return "'*'";
        case TokenKind::Semicolon: return "';'";
        case TokenKind::Newline: return "newline";
        case TokenKind::Projection: return "projection";
        case TokenKind::Slice: return "slice";
        case TokenKind::None: return "None";
        case TokenKind::All: return "ALL";
        case TokenKind::Avg: return "AVG";
    }
    return "";
}

std::vector<Token> tokenize(std::string_view source, std::size_t base_offset) {
    return Lexer(source, base_offset).run();
}

}  // namespace crag::kgql
