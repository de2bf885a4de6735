// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace crag::text {

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);

/// Lowercases, trims and collapses internal whitespace runs to one space.
/// Used for every name/title comparison in the knowledge graph.
std::string normalize_key(std::string_view s);

/// Lowercase, ASCII punctuation removed, whitespace collapsed.
/// Used for answer comparison ("I don't know." == "i dont know").
std::string normalize_answer(std::string_view s);

bool is_idk(std::string_view answer);
bool is_invalid_question(std::string_view answer);

inline constexpr std::string_view kIdk = "i don't know";
inline constexpr std::string_view kInvalidQuestion = "invalid question";

/// Whole-string numeric parse after trimming; rejects inf/nan.
std::optional<double> parse_number(std::string_view s);

/// YYYY, YYYY-MM or YYYY-MM-DD.
bool is_date_like(std::string_view s);

/// Shortest round-trip decimal rendering of a double.
std::string format_double(double v);

std::vector<std::string> split_whitespace(std::string_view s);
std::vector<std::string> split(std::string_view s, std::string_view sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Lowercased alphanumeric runs. Shared by the test embedder and reranker.
std::vector<std::string> terms(std::string_view s);

}  // namespace crag::text
