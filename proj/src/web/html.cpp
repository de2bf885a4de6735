// SPDX-License-Identifier: Apache-2.0
#include "crag/web/html.hpp"

#include <array>
#include <charconv>

#include "crag/common/text.hpp"

namespace crag::web {
namespace {

constexpr std::array kBlockTags = {
    "address", "article", "aside", "blockquote", "body", "br", "dd", "div", "dl", "dt",
    "figcaption", "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5", "h6",
    "head", "header", "hr", "html", "li", "main", "nav", "ol", "p", "pre",
    "section", "table", "tbody", "td", "th", "thead", "title", "tr", "ul",
};

bool is_block(std::string_view tag) {
    for (auto t : kBlockTags)
        if (tag == t) return true;
    return false;
}

bool ieq_prefix(std::string_view s, std::size_t at, std::string_view prefix) {
    if (at + prefix.size() > s.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        char c = s[at + i];
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        if (c != prefix[i]) return false;
    }
    return true;
}

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x110000) {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

// Decodes the entity at html[i] == '&'; returns bytes consumed (0 if not an entity).
std::size_t decode_entity(std::string_view html, std::size_t i, std::string& out) {
    auto semi = html.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) return 0;
    auto name = html.substr(i + 1, semi - i - 1);
    if (!name.empty() && name.front() == '#') {
        std::uint32_t cp = 0;
        auto digits = name.substr(1);
        int base = 10;
        if (!digits.empty() && (digits.front() == 'x' || digits.front() == 'X')) {
            digits.remove_prefix(1);
            base = 16;
        }
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), cp, base);
        if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty()) return 0;
        append_utf8(out, cp);
        return semi - i + 1;
    }
    static constexpr std::pair<std::string_view, std::string_view> kNamed[] = {
        {"amp", "&"},          {"lt", "<"},           {"gt", ">"},           {"quot", "\""},
        {"apos", "'"},         {"nbsp", " "},         {"ndash", "\u2013"},  {"mdash", "\u2014"},
        {"hellip", "\u2026"}, {"lsquo", "\u2018"},  {"rsquo", "\u2019"},  {"ldquo", "\u201c"},
        {"rdquo", "\u201d"},  {"copy", "\u00a9"},
    };
    for (const auto& [n, v] : kNamed) {
        if (name == n) {
            out.append(v);
            return semi - i + 1;
        }
    }
    return 0;
}

// End of a tag starting at '<', honoring quoted attribute values.
std::size_t tag_end(std::string_view html, std::size_t i) {
    char quote = 0;
    for (std::size_t j = i + 1; j < html.size(); ++j) {
        char c = html[j];
        if (quote) {
            if (c == quote) quote = 0;
        } else if (c == '"' || c == '\'') {
            quote = c;
        } else if (c == '>') {
            return j;
        }
    }
    return std::string_view::npos;
}

std::string collapse_lines(std::string_view raw) {
    std::vector<std::string> lines;
    for (const auto& line : text::split(raw, "\n")) {
        auto words = text::split_whitespace(line);
        if (!words.empty()) lines.push_back(text::join(words, " "));
    }
    return text::join(lines, "\n");
}

}  // namespace

std::string extract_text(std::string_view html) {
    std::string raw;
    raw.reserve(html.size());
    std::size_t i = 0;
    while (i < html.size()) {
        char c = html[i];
        if (c == '&') {
            std::size_t used = decode_entity(html, i, raw);
            if (used) {
                i += used;
            } else {
                raw.push_back(c);
                ++i;
            }
            continue;
        }
        if (c != '<') {
            raw.push_back(c == '\n' || c == '\r' || c == '\t' ? ' ' : c);
            ++i;
            continue;
        }
        if (html.compare(i, 4, "<!--") == 0) {
            auto end = html.find("-->", i + 4);
            i = end == std::string_view::npos ? html.size() : end + 3;
            continue;
        }
        auto end = tag_end(html, i);
        if (end == std::string_view::npos) {
            raw.push_back(c);
            ++i;
            continue;
        }
        std::size_t n = i + 1;
        bool closing = n < end && html[n] == '/';
        if (closing) ++n;
        std::size_t name_end = n;
        while (name_end < end && (std::isalnum(static_cast<unsigned char>(html[name_end])))) ++name_end;
        auto name = text::to_lower(html.substr(n, name_end - n));
        i = end + 1;
        if (!closing && (name == "script" || name == "style")) {
            std::string close = "</" + name;
            std::size_t j = i;
            while (j < html.size() && !ieq_prefix(html, j, close)) ++j;
            if (j >= html.size()) {
                i = html.size();
            } else {
                auto close_end = html.find('>', j);
                i = close_end == std::string_view::npos ? html.size() : close_end + 1;
            }
            continue;
        }
        if (is_block(name)) raw.push_back('\n');
    }
    return collapse_lines(raw);
}

}  // namespace crag::web
