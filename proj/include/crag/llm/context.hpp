// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>

#include "crag/web/retrieval.hpp"

namespace crag::llm {

using TokenCounter = std::function<std::size_t(std::string_view)>;

/// Default scheme: every maximal run of alphanumeric bytes (bytes >= 0x80
/// count as alphanumeric) is one token, every other non-whitespace byte is
/// one token. "rain man" -> 2, "<doc>" -> 3.
std::size_t count_tokens(std::string_view text);

TokenCounter default_counter();

inline constexpr std::size_t kMaxContextTokens = 4000;

/// Public paragraphs first, then web chunks by descending score (ties keep
/// input order). Each segment is wrapped "<doc>...</doc>" and segments are
/// joined with "\n". Literal "<doc>"/"</doc>" inside a segment is escaped
/// so the wrapper count stays exact. Segments are taken greedily; the first
/// one that does not fit whole is cut at the last whitespace that fits and
/// nothing after it is considered.
std::string build_context(std::span<const std::string> public_paragraphs,
                          std::span<const web::ScoredChunk> web_chunks, std::size_t max_tokens = kMaxContextTokens,
                          const TokenCounter& counter = default_counter());

/// Longest whitespace-bounded prefix of `text` within `limit` tokens,
/// trailing whitespace removed. Unchanged when it already fits.
std::string truncate_to_tokens(std::string_view text, std::size_t limit,
                               const TokenCounter& counter = default_counter());

/// Number of "<doc>" occurrences.
std::size_t count_doc_tags(std::string_view context);

}  // namespace crag::llm
