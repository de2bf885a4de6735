// SPDX-License-Identifier: Apache-2.0
#include "crag/llm/judgement.hpp"

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "crag/common/text.hpp"

namespace crag::llm {
namespace {

// End (inclusive) of the balanced object starting at reply[start] == '{'.
std::optional<std::size_t> object_end(std::string_view s, std::size_t start) {
    int depth = 0;
    bool in_str = false, esc = false;
    for (std::size_t i = start; i < s.size(); ++i) {
        char c = s[i];
        if (in_str) {
            if (esc) esc = false;
            else if (c == '\\') esc = true;
            else if (c == '"') in_str = false;
            continue;
        }
        if (c == '"') in_str = true;
        else if (c == '{') ++depth;
        else if (c == '}' && --depth == 0) return i;
    }
    return std::nullopt;
}

}  // namespace

bool parse_judgement(std::string_view reply) {
    for (auto pos = reply.find('{'); pos != std::string_view::npos; pos = reply.find('{', pos + 1)) {
        auto end = object_end(reply, pos);
        if (!end) continue;
        auto j = nlohmann::json::parse(reply.substr(pos, *end - pos + 1), nullptr, false);
        if (j.is_discarded() || !j.is_object()) continue;
        for (const auto& [k, v] : j.items()) {
            if (text::to_lower(k) != "accuracy") continue;
            if (v.is_boolean()) return v.get<bool>();
            if (v.is_string()) return text::to_lower(text::trim(v.get<std::string>())) == "true";
            return false;
        }
        return false;
    }
    return false;
}

bool parse_yes_no(std::string_view reply) {
    auto words = text::split_whitespace(text::normalize_answer(reply));
    return !words.empty() && words.front() == "yes";
}

}  // namespace crag::llm
