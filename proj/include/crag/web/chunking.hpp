// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace crag::web {

/// Sizes are in characters (Unicode code points).
struct RetrievalConfig {
    std::size_t parent_chunk_size = 700;
    std::size_t child_chunk_size = 200;
    std::size_t recall_k = 50;
    std::size_t reranker_k = 10;

    /// Throws std::invalid_argument on zero sizes, child > parent or
    /// reranker_k > recall_k.
    void validate() const;

    /// Default reranker_k for a parent size: 5 at 2000 characters and above,
    /// 10 below.
    static std::size_t default_reranker_k(std::size_t parent_chunk_size);
    static RetrievalConfig with_parent_size(std::size_t parent_chunk_size);
};

struct ChunkPair {
    std::string child_id;
    std::string parent_id;
    std::string child_text;
    std::string parent_text;
    std::size_t child_offset = 0;  // byte offset of child_text inside parent_text

    friend bool operator==(const ChunkPair&, const ChunkPair&) = default;
};

/// Partitions `text` into consecutive windows of at most `max_chars`
/// characters, cutting after the last whitespace inside the window when
/// there is one. Concatenating the windows gives back `text`.
std::vector<std::string> split_windows(std::string_view text, std::size_t max_chars);

/// Parent windows of parent_chunk_size, each split into child windows of
/// child_chunk_size. Ids are "<doc_id>:p<i>" and "<doc_id>:p<i>:c<j>".
std::vector<ChunkPair> split_parent_child(std::string_view text, const RetrievalConfig& config,
                                          std::string_view doc_id = "doc");

/// Code point count of UTF-8 text. Continuation bytes always belong to the
/// character before them, so cuts never split a multi-byte sequence.
std::size_t char_count(std::string_view text);

}  // namespace crag::web
