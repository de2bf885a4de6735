// SPDX-License-Identifier: Apache-2.0
#include "crag/web/chunking.hpp"

namespace crag::web {
namespace {

bool is_continuation(char c) { return (static_cast<unsigned char>(c) & 0xC0) == 0x80; }

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

// Byte offsets of every character start, plus text.size() as a sentinel.
std::vector<std::size_t> char_starts(std::string_view text) {
    std::vector<std::size_t> starts;
    starts.reserve(text.size() + 1);
    for (std::size_t i = 0; i < text.size(); ++i)
        if (i == 0 || !is_continuation(text[i])) starts.push_back(i);
    starts.push_back(text.size());
    return starts;
}

}  // namespace

void RetrievalConfig::validate() const {
    if (parent_chunk_size == 0 || child_chunk_size == 0)
        throw std::invalid_argument("chunk sizes must be positive");
    if (child_chunk_size > parent_chunk_size)
        throw std::invalid_argument("child_chunk_size must not exceed parent_chunk_size");
    if (recall_k == 0 || reranker_k == 0) throw std::invalid_argument("recall_k and reranker_k must be positive");
    if (reranker_k > recall_k) throw std::invalid_argument("reranker_k must not exceed recall_k");
}

std::size_t RetrievalConfig::default_reranker_k(std::size_t parent_chunk_size) {
    return parent_chunk_size >= 2000 ? 5 : 10;
}

RetrievalConfig RetrievalConfig::with_parent_size(std::size_t parent_chunk_size) {
    RetrievalConfig c;
    c.parent_chunk_size = parent_chunk_size;
    c.reranker_k = default_reranker_k(parent_chunk_size);
    return c;
}

std::size_t char_count(std::string_view text) { return char_starts(text).size() - 1; }

std::vector<std::string> split_windows(std::string_view text, std::size_t max_chars) {
    if (max_chars == 0) throw std::invalid_argument("window size must be positive");
    std::vector<std::string> out;
    const auto starts = char_starts(text);
    const std::size_t n = starts.size() - 1;
    std::size_t pos = 0;
    while (pos < n) {
        std::size_t cut = n;
        if (n - pos > max_chars) {
            cut = pos + max_chars;
            for (std::size_t c = pos + max_chars; c > pos; --c) {
                if (is_space(text[starts[c - 1]])) {
                    cut = c;
                    break;
                }
            }
        }
        out.emplace_back(text.substr(starts[pos], starts[cut] - starts[pos]));
        pos = cut;
    }
    return out;
}

std::vector<ChunkPair> split_parent_child(std::string_view text, const RetrievalConfig& config,
                                          std::string_view doc_id) {
    config.validate();
    std::vector<ChunkPair> out;
    auto parents = split_windows(text, config.parent_chunk_size);
    for (std::size_t p = 0; p < parents.size(); ++p) {
        std::string parent_id = std::string(doc_id) + ":p" + std::to_string(p);
        std::size_t offset = 0;
        auto children = split_windows(parents[p], config.child_chunk_size);
        for (std::size_t c = 0; c < children.size(); ++c) {
            ChunkPair pair;
            pair.child_id = parent_id + ":c" + std::to_string(c);
            pair.parent_id = parent_id;
            pair.child_offset = offset;
            offset += children[c].size();
            pair.child_text = std::move(children[c]);
            pair.parent_text = parents[p];
            out.push_back(std::move(pair));
        }
    }
    return out;
}

}  // namespace crag::web
