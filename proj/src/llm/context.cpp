// SPDX-License-Identifier: Apache-2.0
#include "crag/llm/context.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <optional>
#include <vector>

namespace crag::llm {
namespace {

bool is_word_byte(unsigned char c) { return c >= 0x80 || std::isalnum(c); }
bool is_space(unsigned char c) { return std::isspace(c) != 0; }

void replace_all(std::string& s, std::string_view from, std::string_view to) {
    std::size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
        s.replace(pos, from.size(), to);
        pos += to.size();
    }
}

std::string escape_segment(std::string_view seg) {
    std::string s(seg);
    replace_all(s, "</doc>", "&lt;/doc&gt;");
    replace_all(s, "<doc>", "&lt;doc&gt;");
    return s;
}

// Whitespace-bounded prefix lengths of `text`, ascending, excluding 0.
std::vector<std::size_t> cut_points(std::string_view text) {
    std::vector<std::size_t> cuts;
    for (std::size_t i = 1; i < text.size(); ++i)
        if (is_space(static_cast<unsigned char>(text[i])) && !is_space(static_cast<unsigned char>(text[i - 1])))
            cuts.push_back(i);
    if (!text.empty()) cuts.push_back(text.size());
    return cuts;
}

// Largest fitting cut, by bisection; a non-monotone counter may get a
// smaller cut than the best one, never an oversized one.
std::optional<std::size_t> best_cut(const std::vector<std::size_t>& cuts,
                                    const std::function<bool(std::size_t)>& fits) {
    std::size_t lo = 0, hi = cuts.size();
    while (lo < hi) {
        std::size_t mid = lo + (hi - lo) / 2;
        if (fits(cuts[mid])) lo = mid + 1;
        else hi = mid;
    }
    if (lo == 0 || !fits(cuts[lo - 1])) return std::nullopt;
    return cuts[lo - 1];
}

}  // namespace

std::size_t count_tokens(std::string_view text) {
    std::size_t n = 0;
    bool in_word = false;
    for (char ch : text) {
        auto c = static_cast<unsigned char>(ch);
        if (is_word_byte(c)) {
            if (!in_word) ++n;
            in_word = true;
        } else {
            in_word = false;
            if (!is_space(c)) ++n;
        }
    }
    return n;
}

TokenCounter default_counter() { return [](std::string_view s) { return count_tokens(s); }; }

std::size_t count_doc_tags(std::string_view context) {
    std::size_t n = 0;
    for (auto pos = context.find("<doc>"); pos != std::string_view::npos; pos = context.find("<doc>", pos + 1)) ++n;
    return n;
}

std::string build_context(std::span<const std::string> public_paragraphs,
                          std::span<const web::ScoredChunk> web_chunks, std::size_t max_tokens,
                          const TokenCounter& counter) {
    std::vector<std::string> segments(public_paragraphs.begin(), public_paragraphs.end());
    std::vector<std::size_t> order(web_chunks.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return web_chunks[a].score > web_chunks[b].score; });
    for (auto i : order) segments.push_back(web_chunks[i].parent_text);

    std::string out;
    for (const auto& raw : segments) {
        std::string seg = escape_segment(raw);
        std::string prefix = out.empty() ? std::string{} : out + "\n";
        auto render = [&](std::string_view body) { return prefix + "<doc>" + std::string(body) + "</doc>"; };
        std::string whole = render(seg);
        if (counter(whole) <= max_tokens) {
            out = std::move(whole);
            continue;
        }
        auto cut = best_cut(cut_points(seg),
                            [&](std::size_t n) { return counter(render(seg.substr(0, n))) <= max_tokens; });
        if (cut) out = render(seg.substr(0, *cut));
        break;
    }
    return out;
}

std::string truncate_to_tokens(std::string_view text, std::size_t limit, const TokenCounter& counter) {
    auto trimmed = text;
    while (!trimmed.empty() && is_space(static_cast<unsigned char>(trimmed.back()))) trimmed.remove_suffix(1);
    if (counter(trimmed) <= limit) return std::string(trimmed);
    auto cut = best_cut(cut_points(trimmed), [&](std::size_t n) { return counter(trimmed.substr(0, n)) <= limit; });
    return cut ? std::string(trimmed.substr(0, *cut)) : std::string{};
}

}  // namespace crag::llm
